//! Named configurations shipped with the crate.

use crate::error::{Error, Result};
use crate::model::Configuration;

/// A configuration with a stable name and a short description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedConfiguration {
    pub name: &'static str,
    pub configuration: Configuration,
    pub notes: &'static str,
}

const ENTRIES: &[(&str, usize, &[&str], &str)] = &[
    ("fano", 7, &["123", "156", "147", "257", "246", "345", "367"], "projective plane of order two, 7 points and 7 lines"),
    ("maclane", 8, &["346", "267", "156", "235", "147", "128", "378", "458"], "the unique 8_3 configuration"),
    (
        "affine3",
        9,
        &["123", "456", "789", "147", "258", "369", "159", "267", "348", "168", "249", "357"],
        "affine plane of order three, 9 points and 12 lines",
    ),
    ("pappus", 9, &["123", "157", "168", "247", "269", "348", "359", "456", "789"], "Pappus 9_3 configuration"),
    ("k9", 9, &["124", "136", "179", "235", "278", "389", "457", "469", "568"], "the second 9_3 configuration"),
    ("qs", 6, &["123", "156", "246", "345"], "quadrilateral set: four lines in general position and their six meets"),
    ("three-concurrent-lines", 7, &["127", "347", "567"], "three lines through a common point"),
];

fn parse_line(s: &str) -> Vec<i64> {
    s.bytes().map(|b| (b - b'0') as i64).collect()
}

/// Every shipped configuration, in a fixed order.
pub fn all() -> Vec<NamedConfiguration> {
    ENTRIES
        .iter()
        .map(|(name, d, lines, notes)| {
            let lines: Vec<Vec<i64>> = lines.iter().map(|l| parse_line(l)).collect();
            NamedConfiguration {
                name,
                configuration: Configuration::new(*d, &lines).expect("shipped configuration is valid"),
                notes,
            }
        })
        .collect()
}

pub fn names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.0).collect()
}

pub fn get(name: &str) -> Result<Configuration> {
    all()
        .into_iter()
        .find(|n| n.name == name)
        .map(|n| n.configuration)
        .ok_or_else(|| Error::ParseError(format!("unknown configuration name {name:?}; known: {}", names().join(", "))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_shapes() {
        for n in all() {
            let c = &n.configuration;
            assert_eq!(c.rank(), 3, "{}", n.name);
            if ["fano", "maclane", "pappus", "k9"].contains(&n.name) {
                assert!(c.points().iter().all(|p| c.degree(p) == 3), "{} is not 3-regular", n.name);
            }
        }
        assert!(get("nope").is_err());
    }
}
