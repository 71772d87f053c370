use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::tokens::normalize_token;

/// A script token paired with a subtitle token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WordMatch {
    pub script_token_index: usize,
    pub subtitle_token_index: usize,
}

/// Maximum-cardinality order-preserving matching of equal normalized tokens
/// (a longest common subsequence). Among maximum matchings the one with the
/// lexicographically earliest subtitle indices is returned, and for each
/// subtitle token the earliest usable script token.
// TODO: band the table around the diagonal for feature-length scripts;
// the full table holds (n+1)(m+1) counters.
pub fn align_dialogue_dp<A: AsRef<str>, B: AsRef<str>>(
    script_tokens: &[A],
    subtitle_tokens: &[B],
) -> Vec<WordMatch> {
    let a: Vec<Option<String>> = script_tokens
        .iter()
        .map(|t| normalize_token(t.as_ref()))
        .collect();
    let b: Vec<Option<String>> = subtitle_tokens
        .iter()
        .map(|t| normalize_token(t.as_ref()))
        .collect();
    let (n, m) = (a.len(), b.len());
    if n == 0 || m == 0 {
        return Vec::new();
    }

    // suffix[i][j] = LCS length of a[i..] and b[j..]
    let width = m + 1;
    let mut suffix = vec![0u32; (n + 1) * width];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            suffix[i * width + j] = match (&a[i], &b[j]) {
                (Some(x), Some(y)) if x == y => suffix[(i + 1) * width + j + 1] + 1,
                _ => suffix[(i + 1) * width + j].max(suffix[i * width + j + 1]),
            };
        }
    }

    let mut positions: HashMap<&str, Vec<usize>> = HashMap::new();
    for (i, tok) in a.iter().enumerate() {
        if let Some(t) = tok {
            positions.entry(t.as_str()).or_default().push(i);
        }
    }

    let mut matches = Vec::with_capacity(suffix[0] as usize);
    let (mut i, mut j) = (0usize, 0usize);
    let mut remaining = suffix[0];
    while remaining > 0 {
        let found = (j..m).find_map(|jj| {
            let tok = b[jj].as_ref()?;
            let occ = positions.get(tok.as_str())?;
            let &ii = occ.get(occ.partition_point(|&p| p < i))?;
            (suffix[(ii + 1) * width + jj + 1] + 1 == remaining).then_some((ii, jj))
        });
        let Some((ii, jj)) = found else {
            debug_assert!(false, "LCS reconstruction stalled");
            break;
        };
        matches.push(WordMatch {
            script_token_index: ii,
            subtitle_token_index: jj,
        });
        i = ii + 1;
        j = jj + 1;
        remaining -= 1;
    }
    matches
}
