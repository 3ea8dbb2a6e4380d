//! Sessions shipped with the binary, used as worked examples and as
//! fixed regression inputs.

use crate::parse::{self, SessionSpec};

#[derive(Clone, Copy, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub text: &'static str,
}

/// Every shipped session, in a fixed order.
pub const ENTRIES: &[CorpusEntry] = &[
    CorpusEntry { name: "free_xy", text: include_str!("../corpus/free_xy.ialg") },
    CorpusEntry { name: "poly_xy", text: include_str!("../corpus/poly_xy.ialg") },
    CorpusEntry { name: "q_poly_xy", text: include_str!("../corpus/q_poly_xy.ialg") },
    CorpusEntry { name: "deloop_zn", text: include_str!("../corpus/deloop_zn.ialg") },
    CorpusEntry { name: "chain3_product", text: include_str!("../corpus/chain3_product.ialg") },
];

pub fn find(name: &str) -> Option<&'static CorpusEntry> {
    ENTRIES.iter().find(|e| e.name == name)
}

/// Parse one shipped entry; they are tested to parse, so this does not
/// fail at runtime.
pub fn spec(entry: &CorpusEntry) -> SessionSpec {
    parse::parse(entry.text).expect("shipped sessions parse")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_parses_and_prints_stably() {
        assert!(ENTRIES.len() >= 5);
        for e in ENTRIES {
            let spec = spec(e);
            let once = parse::print(&spec);
            let again = parse::print(&parse::parse(&once).unwrap());
            assert_eq!(once, again, "{} does not round-trip", e.name);
        }
    }

    #[test]
    fn free_and_poly_differ_by_one_relation_line() {
        let free = find("free_xy").unwrap().text;
        let poly = find("poly_xy").unwrap().text;
        let free_lines: Vec<&str> = free.lines().collect();
        let poly_lines: Vec<&str> = poly.lines().collect();
        let extra: Vec<&str> = poly_lines
            .iter()
            .filter(|l| !free_lines.contains(l))
            .copied()
            .collect();
        assert_eq!(extra, vec!["rel (1,1): x*y - y*x"]);
        assert_eq!(poly_lines.len(), free_lines.len() + 1);
        assert!(free_lines.iter().all(|l| poly_lines.contains(l)));
    }
}
