//! Line counting with blank/comment/code classification.

use serde::{Deserialize, Serialize};

use super::lexer;

/// Per-file line counts. `total` always equals `blank + comment + code`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocCounts {
    pub total: u64,
    pub blank: u64,
    pub comment: u64,
    pub code: u64,
}

/// Counts lines and classifies each as blank, comment, or code.
///
/// A line is blank when it holds only whitespace, comment when all its
/// non-whitespace content lies within `//` or `/* */` comments, and code
/// otherwise. Code followed by a trailing comment counts as code. A final
/// line without a trailing newline still counts as a line.
pub fn count_loc(source_text: &str) -> LocCounts {
    let scanned = lexer::scan(source_text);
    let mut counts = LocCounts { total: scanned.lines.len() as u64, ..Default::default() };
    for flags in &scanned.lines {
        if flags.code {
            counts.code += 1;
        } else if flags.comment {
            counts.comment += 1;
        } else {
            counts.blank += 1;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_input_has_no_lines() {
        assert_eq!(count_loc(""), LocCounts { total: 0, blank: 0, comment: 0, code: 0 });
    }

    #[test]
    fn statements_blanks_and_comments_are_classified() {
        let src = "int a;\nint b;\nint c;\n\n// one\n/* two */\n";
        assert_eq!(count_loc(src), LocCounts { total: 6, blank: 1, comment: 2, code: 3 });
    }

    #[test]
    fn trailing_comment_counts_as_code() {
        assert_eq!(count_loc("int x; // note"), LocCounts { total: 1, blank: 0, comment: 0, code: 1 });
    }

    #[test]
    fn block_comment_interior_lines_are_comment_or_blank() {
        let src = "/* start\n body\n\n end */\nint x;\n";
        assert_eq!(count_loc(src), LocCounts { total: 5, blank: 1, comment: 3, code: 1 });
    }

    #[test]
    fn comment_opener_inside_string_stays_code() {
        let src = "s = \"/* not a comment\";\nint x;\n";
        assert_eq!(count_loc(src), LocCounts { total: 2, blank: 0, comment: 0, code: 2 });
    }

    #[test]
    fn missing_final_newline_still_counts() {
        assert_eq!(count_loc("a\nb").total, 2);
        assert_eq!(count_loc("a\nb\n").total, 2);
    }

    /// Lines made of classifiable fragments, free of unterminated block
    /// comments so files can be concatenated.
    fn line_strategy() -> impl Strategy<Value = String> {
        prop_oneof![
            Just(String::new()),
            Just("   ".to_string()),
            Just("int value;".to_string()),
            Just("// comment line".to_string()),
            Just("/* closed */".to_string()),
            Just("call(a, b); // trailing".to_string()),
            Just("s = \"// in string\";".to_string()),
            "[ -~]{0,30}".prop_map(|s| s.replace("/*", "||").replace('"', " ").replace('\'', " ")),
        ]
    }

    fn file_strategy() -> impl Strategy<Value = String> {
        prop::collection::vec(line_strategy(), 0..40).prop_map(|lines| {
            let mut text = lines.join("\n");
            if !text.is_empty() {
                text.push('\n');
            }
            text
        })
    }

    proptest! {
        #[test]
        fn totals_always_decompose(src in "\\PC*") {
            let counts = count_loc(&src);
            prop_assert_eq!(counts.total, counts.blank + counts.comment + counts.code);
        }

        #[test]
        fn concatenation_sums_componentwise(a in file_strategy(), b in file_strategy()) {
            let whole = count_loc(&format!("{a}{b}"));
            let (ca, cb) = (count_loc(&a), count_loc(&b));
            prop_assert_eq!(whole.total, ca.total + cb.total);
            prop_assert_eq!(whole.blank, ca.blank + cb.blank);
            prop_assert_eq!(whole.comment, ca.comment + cb.comment);
            prop_assert_eq!(whole.code, ca.code + cb.code);
        }
    }
}
