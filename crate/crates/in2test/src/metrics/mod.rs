//! Product-metric extraction from source text: line counts, method spans,
//! and cyclomatic complexity for brace-delimited C/Java-like code.
//!
//! Class length counts every line, blank and comment lines included. The
//! per-part complexity defaults to the maximum over the part's methods;
//! `sum` and `mean` are available for contexts that aggregate differently.

mod lexer;
mod loc;
mod methods;

pub use loc::{count_loc, LocCounts};
pub use methods::{cyclomatic, extract_methods, MethodSpan};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Structural problem that prevents method extraction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructuralError {
    #[error("unbalanced braces at line {line}")]
    UnbalancedBraces { line: usize },
}

/// How per-method cyclomatic values combine into the part-level figure.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregate {
    #[default]
    Max,
    Sum,
    Mean,
}

/// The three product metrics of one part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartMetrics {
    pub loc: u64,
    pub mean_method_length: f64,
    pub mccabe: u64,
}

/// Computes a part's product metrics from its source text.
///
/// `loc` is the total line count. `mean_method_length` is the arithmetic mean
/// of the detected method span lengths (0 when there are none). `mccabe`
/// aggregates the per-method cyclomatic values; `mean` rounds to the nearest
/// integer.
pub fn extract_part_metrics(source_text: &str, aggregate: Aggregate) -> Result<PartMetrics, StructuralError> {
    let loc = count_loc(source_text).total;
    let spans = extract_methods(source_text)?;
    if spans.is_empty() {
        return Ok(PartMetrics { loc, mean_method_length: 0.0, mccabe: 0 });
    }
    let mean_method_length =
        spans.iter().map(|m| m.length() as f64).sum::<f64>() / spans.len() as f64;
    let values: Vec<u64> = spans.iter().map(cyclomatic).collect();
    let mccabe = match aggregate {
        Aggregate::Max => values.iter().copied().max().unwrap_or(0),
        Aggregate::Sum => values.iter().sum(),
        Aggregate::Mean => {
            (values.iter().sum::<u64>() as f64 / values.len() as f64).round() as u64
        }
    };
    Ok(PartMetrics { loc, mean_method_length, mccabe })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn max_aggregate_takes_the_largest_method() {
        // complexities 2 and 5
        let src = "void a() {\n  if (x) { p(); }\n}\n\
                   void b() {\n  if (x && y || z) { q(); }\n  while (w) { r(); }\n}\n";
        let m = extract_part_metrics(src, Aggregate::Max).unwrap();
        assert_eq!(m.mccabe, 5);
        let sum = extract_part_metrics(src, Aggregate::Sum).unwrap();
        assert_eq!(sum.mccabe, 7);
        let mean = extract_part_metrics(src, Aggregate::Mean).unwrap();
        assert_eq!(mean.mccabe, 4); // (2+5)/2 rounded
    }

    #[test]
    fn file_without_methods_reports_line_count_only() {
        let src = "// header\nint a;\nint b;\n\n";
        let m = extract_part_metrics(src, Aggregate::Max).unwrap();
        assert_eq!(m, PartMetrics { loc: 4, mean_method_length: 0.0, mccabe: 0 });
    }

    #[test]
    fn max_aggregate_equals_maximum_of_per_method_values() {
        let src = "void a() {\n  if (x) { p(); }\n}\n\
                   void b() {\n  q();\n}\n\
                   void c() {\n  for (i; i; i) { if (j) { r(); } }\n}\n";
        let spans = extract_methods(src).unwrap();
        let per_method_max = spans.iter().map(cyclomatic).max().unwrap();
        let m = extract_part_metrics(src, Aggregate::Max).unwrap();
        assert_eq!(m.mccabe, per_method_max);
    }

    /// Straight-line statements only, so the base complexity is exactly 1.
    fn straight_body(statements: &[u8]) -> String {
        statements
            .iter()
            .map(|s| format!("  v{s} = call{s}(arg);\n"))
            .collect()
    }

    proptest! {
        #[test]
        fn straight_line_methods_have_complexity_one(stmts in prop::collection::vec(0u8..10, 0..8)) {
            let src = format!("void f() {{\n{}}}\n", straight_body(&stmts));
            let spans = extract_methods(&src).unwrap();
            prop_assert_eq!(spans.len(), 1);
            prop_assert_eq!(cyclomatic(&spans[0]), 1);
        }

        #[test]
        fn each_inserted_if_adds_exactly_one(
            stmts in prop::collection::vec(0u8..10, 0..6),
            ifs in 0usize..6,
        ) {
            let mut body = straight_body(&stmts);
            for k in 0..ifs {
                body.push_str(&format!("  if (flag{k}) {{ handle{k}(); }}\n"));
            }
            let src = format!("void f() {{\n{body}}}\n");
            let spans = extract_methods(&src).unwrap();
            prop_assert_eq!(cyclomatic(&spans[0]), 1 + ifs as u64);
        }

        #[test]
        fn adversarial_literals_never_affect_complexity(
            payload in "[a-z{}()?&|]*",
            comment in "[a-z{}()?&|]*",
        ) {
            let src = format!(
                "void f() {{\n  s = \"{payload}\";\n  // {comment}\n  t = \"if (a && b) {{}}\";\n}}\n"
            );
            let spans = extract_methods(&src).unwrap();
            prop_assert_eq!(spans.len(), 1);
            prop_assert_eq!(cyclomatic(&spans[0]), 1);
        }
    }
}
