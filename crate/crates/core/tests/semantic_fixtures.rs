use moviedesc::semantic::{
    chunk_clause, split_clauses, Chunk, Clause, ContextDisambiguator, LabelMode, Lexicon,
    LexiconTagger, SemanticParser,
};

fn fixture_lines(text: &str) -> impl Iterator<Item = (&str, &str)> {
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split_once(" => ").expect("fixture line has =>"))
}

#[test]
fn clause_splitting_fixture() {
    let lex = Lexicon::bundled();
    let tagger = LexiconTagger::new(&lex);
    let mut n = 0;
    for (sentence, expected) in fixture_lines(include_str!("fixtures/clauses.txt")) {
        let got: Vec<String> = split_clauses(sentence, &tagger).iter().map(Clause::text).collect();
        let want: Vec<&str> = expected.split(" | ").collect();
        assert_eq!(got, want, "{sentence}");
        n += 1;
    }
    assert_eq!(n, 20);
}

#[test]
fn chunking_fixture() {
    let lex = Lexicon::bundled();
    let tagger = LexiconTagger::new(&lex);
    for (clause, expected) in fixture_lines(include_str!("fixtures/chunks.txt")) {
        let clause = Clause::from_text(clause).unwrap();
        let got: Vec<String> = chunk_clause(&clause, &tagger).iter().map(Chunk::to_string).collect();
        assert_eq!(got.join(" "), expected, "{}", clause.text());
    }
}

#[test]
fn selectional_restriction_fixture() {
    let parser = SemanticParser::with_disambiguator(Lexicon::bundled(), Box::new(ContextDisambiguator));
    for (sentence, expected) in fixture_lines(include_str!("fixtures/restrictions.txt")) {
        let (frame, tuple) = expected.split_once(" | ").unwrap();
        let parses = parser.parse(sentence);
        assert_eq!(parses.len(), 1, "{sentence}");
        let p = &parses[0];
        assert_eq!(p.frame_id().unwrap_or("-"), frame, "{sentence}");
        assert_eq!(
            p.tuple(LabelMode::Sense, parser.lexicon()).unwrap().to_string(),
            tuple,
            "{sentence}"
        );
        for a in &p.matches.assignments {
            assert!(a.satisfies_restrictions(parser.lexicon()), "{sentence}");
        }
    }
}
