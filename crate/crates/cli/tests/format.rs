//! Grammar robustness: the model format is line-oriented with `#` comments,
//! so sprinkling comments, blank lines, and surrounding whitespace over a
//! valid file never changes what it parses to.

use corad::definition::{parse, ModelDefinition};
use proptest::prelude::*;

#[derive(Debug, Clone)]
struct Decoration {
    blank_before: bool,
    comment_before: Option<String>,
    leading_spaces: usize,
    trailing_spaces: usize,
    inline_comment: Option<String>,
}

fn decoration() -> impl Strategy<Value = Decoration> {
    (
        any::<bool>(),
        proptest::option::of("[a-z ]{0,16}"),
        0..4usize,
        0..4usize,
        proptest::option::of("[a-z0-9 =]{0,12}"),
    )
        .prop_map(|(blank_before, comment_before, leading_spaces, trailing_spaces, inline_comment)| {
            Decoration { blank_before, comment_before, leading_spaces, trailing_spaces, inline_comment }
        })
}

fn decorate(text: &str, decos: &[Decoration]) -> String {
    let mut out = String::new();
    for (line, deco) in text.lines().zip(decos.iter().cycle()) {
        if deco.blank_before {
            out.push('\n');
        }
        if let Some(c) = &deco.comment_before {
            out.push_str(&format!("# {c}\n"));
        }
        out.push_str(&" ".repeat(deco.leading_spaces));
        out.push_str(line);
        if let Some(c) = &deco.inline_comment {
            out.push_str(&" ".repeat(deco.trailing_spaces));
            out.push_str(&format!("# {c}"));
        } else {
            out.push_str(&" ".repeat(deco.trailing_spaces));
        }
        out.push('\n');
    }
    out
}

fn corpus_text(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name);
    std::fs::read_to_string(path).expect("corpus file reads")
}

fn parsed(text: &str) -> ModelDefinition {
    parse(text).expect("valid model text parses")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn comments_and_whitespace_never_change_the_parse(
        decos in proptest::collection::vec(decoration(), 1..24),
        which in 0..4usize,
    ) {
        let name = [
            "hilb_2_2.corad",
            "fano_3_1.corad",
            "nonstrict_counterexample.corad",
            "incidence_pass.corad",
        ][which];
        let base = corpus_text(name);
        let perturbed = decorate(&base, &decos);
        prop_assert_eq!(parsed(&base), parsed(&perturbed));
    }
}
