/// Lowercase, strip punctuation, keep letters and digits. Tokens that are
/// pure punctuation disappear.
pub fn normalize_tokens(text: &str) -> Vec<String> {
    text.split_whitespace()
        .filter_map(normalize_token)
        .collect()
}

pub(crate) fn normalize_token(raw: &str) -> Option<String> {
    let t: String = raw
        .chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(char::to_lowercase)
        .collect();
    (!t.is_empty()).then_some(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        assert_eq!(
            normalize_tokens("Don't GO -- it's 10:30!"),
            vec!["dont", "go", "its", "1030"]
        );
        assert!(normalize_tokens("... --").is_empty());
    }
}
