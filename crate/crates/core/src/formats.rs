//! Plain-text sample and distribution files.

use std::collections::HashMap;

use crate::distribution::Distribution;
use crate::error::{Error, Result};

/// Whitespace-separated symbol tokens, mapped to indices in order of first
/// appearance. Returns the indices and the distinct tokens.
pub fn parse_samples(text: &str) -> (Vec<usize>, Vec<String>) {
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut names = Vec::new();
    let samples = text
        .split_whitespace()
        .map(|tok| {
            *index.entry(tok).or_insert_with(|| {
                names.push(tok.to_string());
                names.len() - 1
            })
        })
        .collect();
    (samples, names)
}

/// One probability per line; blank lines and `#` comments are ignored.
pub fn parse_distribution_file(text: &str) -> Result<Distribution> {
    let probs = text
        .lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let line = line.split('#').next().unwrap_or("").trim();
            (!line.is_empty()).then(|| {
                line.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    Distribution::new(probs)
}

/// Inverse of [`parse_distribution_file`], bit-exact on reload.
pub fn write_distribution(p: &Distribution) -> String {
    p.probs().iter().map(|x| format!("{x:e}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_are_indexed_by_first_appearance() {
        let (s, names) = parse_samples("b a b\n c\tb");
        assert_eq!(s, vec![0, 1, 0, 2, 0]);
        assert_eq!(names, vec!["b", "a", "c"]);
        assert!(parse_samples("  \n").0.is_empty());
    }

    #[test]
    fn distribution_files() {
        let p = parse_distribution_file("# pair\n0.25\n\n0.75\n").unwrap();
        assert_eq!(p.probs(), &[0.25, 0.75]);
        assert!(parse_distribution_file("0.5\nhalf\n").is_err());
        assert!(parse_distribution_file("0.5\n0.6\n").is_err());
        let z = Distribution::from_weights(&[1.0, 0.5, 1.0 / 3.0]).unwrap();
        assert_eq!(parse_distribution_file(&write_distribution(&z)).unwrap(), z);
    }
}
