//! JSON encodings of configurations, matroids, X-systems and reports.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::library;
use crate::model::{Configuration, Matroid};
use crate::pointset::PointSet;
use crate::xmatroid::XSystem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationRecord {
    pub d: i64,
    pub lines: Vec<Vec<i64>>,
}

/// Matroid encoding. `lines_over_classes` holds zero-based positions into `classes`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidRecord {
    pub d: i64,
    pub loops: Vec<i64>,
    pub classes: Vec<Vec<i64>>,
    pub lines_over_classes: Vec<Vec<i64>>,
    pub rank: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XSystemRecord {
    pub d: i64,
    #[serde(rename = "X")]
    pub family: Vec<Vec<i64>>,
}

fn to_i64(v: Vec<u8>) -> Vec<i64> {
    v.into_iter().map(i64::from).collect()
}

fn check_d(d: i64) -> Result<usize> {
    if !(1..=crate::pointset::MAX_POINTS as i64).contains(&d) {
        return Err(Error::ValidationError(format!("ground set size {d} out of range")));
    }
    Ok(d as usize)
}

fn to_set(v: &[i64], d: usize) -> Result<PointSet> {
    let mut s = PointSet::EMPTY;
    for &x in v {
        if x < 1 || x > d as i64 {
            return Err(Error::LabelOutOfRange { label: x, d });
        }
        s.insert(x as u8);
    }
    Ok(s)
}

impl From<&Configuration> for ConfigurationRecord {
    fn from(c: &Configuration) -> Self {
        ConfigurationRecord { d: c.d() as i64, lines: c.lines().iter().map(|l| to_i64(l.to_vec())).collect() }
    }
}

impl TryFrom<&ConfigurationRecord> for Configuration {
    type Error = Error;
    fn try_from(r: &ConfigurationRecord) -> Result<Configuration> {
        Configuration::new(check_d(r.d)?, &r.lines)
    }
}

impl From<&Matroid> for MatroidRecord {
    fn from(m: &Matroid) -> Self {
        MatroidRecord {
            d: m.d() as i64,
            loops: to_i64(m.loops().to_vec()),
            classes: m.classes().iter().map(|c| to_i64(c.to_vec())).collect(),
            lines_over_classes: m
                .lines_over_classes()
                .iter()
                .map(|l| l.iter().map(|c| c as i64 - 1).collect())
                .collect(),
            rank: m.rank() as i64,
        }
    }
}

impl TryFrom<&MatroidRecord> for Matroid {
    type Error = Error;
    fn try_from(r: &MatroidRecord) -> Result<Matroid> {
        let d = check_d(r.d)?;
        let loops = to_set(&r.loops, d)?;
        let classes = r.classes.iter().map(|c| to_set(c, d)).collect::<Result<Vec<_>>>()?;
        let mut lines = Vec::with_capacity(r.lines_over_classes.len());
        for l in &r.lines_over_classes {
            let mut s = PointSet::EMPTY;
            for &i in l {
                if i < 0 || i as usize >= classes.len() {
                    return Err(Error::ValidationError(format!("line refers to class position {i}")));
                }
                s.insert(i as u8 + 1);
            }
            lines.push(s);
        }
        let m = Matroid::new(d, loops, classes, lines)?;
        if m.rank() as i64 != r.rank {
            return Err(Error::ValidationError(format!("declared rank {} but structure has rank {}", r.rank, m.rank())));
        }
        Ok(m)
    }
}

impl From<&XSystem> for XSystemRecord {
    fn from(x: &XSystem) -> Self {
        XSystemRecord { d: x.d() as i64, family: x.family().iter().map(|s| to_i64(s.to_vec())).collect() }
    }
}

impl TryFrom<&XSystemRecord> for XSystem {
    type Error = Error;
    fn try_from(r: &XSystemRecord) -> Result<XSystem> {
        let d = check_d(r.d)?;
        let family = r.family.iter().map(|x| to_set(x, d)).collect::<Result<Vec<_>>>()?;
        XSystem::new(d, family)
    }
}

pub fn matroid_to_json(m: &Matroid) -> String {
    serde_json::to_string(&MatroidRecord::from(m)).expect("matroid record serializes")
}

pub fn configuration_to_json(c: &Configuration) -> String {
    serde_json::to_string(&ConfigurationRecord::from(c)).expect("configuration record serializes")
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::ParseError(format!("line {}, column {}: {e}", e.line(), e.column()))
}

pub fn parse_configuration_json(text: &str) -> Result<Configuration> {
    let r: ConfigurationRecord = serde_json::from_str(text).map_err(parse_err)?;
    Configuration::try_from(&r)
}

pub fn parse_matroid_json(text: &str) -> Result<Matroid> {
    let r: MatroidRecord = serde_json::from_str(text).map_err(parse_err)?;
    Matroid::try_from(&r)
}

pub fn parse_xsystem_json(text: &str) -> Result<XSystem> {
    let r: XSystemRecord = serde_json::from_str(text).map_err(parse_err)?;
    XSystem::try_from(&r)
}

/// Resolves a library name, or failing that reads a configuration file.
pub fn parse_config(source: &str) -> Result<Configuration> {
    if library::names().contains(&source) {
        return library::get(source);
    }
    let path = std::path::Path::new(source);
    if !path.exists() {
        return Err(Error::ParseError(format!(
            "{source:?} is neither a library name ({}) nor an existing file",
            library::names().join(", ")
        )));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::ParseError(format!("{source}: {e}")))?;
    parse_configuration_json(&text)
}
