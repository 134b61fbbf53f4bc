//! Language tags shared across the pipeline.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The five output languages of the transpiler.
///
/// MINIFOL and CLIF are lossless (they round-trip to a `Formula`); CGIF, TFL,
/// and TFL+ drop structure and are validated by grammar membership only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TargetLanguage {
    Minifol,
    Clif,
    Cgif,
    Tfl,
    TflPlus,
}

impl TargetLanguage {
    pub const ALL: [TargetLanguage; 5] = [
        TargetLanguage::Minifol,
        TargetLanguage::Clif,
        TargetLanguage::Cgif,
        TargetLanguage::Tfl,
        TargetLanguage::TflPlus,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TargetLanguage::Minifol => "minifol",
            TargetLanguage::Clif => "clif",
            TargetLanguage::Cgif => "cgif",
            TargetLanguage::Tfl => "tfl",
            TargetLanguage::TflPlus => "tflplus",
        }
    }

    /// Whether emitted text preserves enough structure to reconstruct the
    /// source formula.
    pub fn is_lossless(&self) -> bool {
        matches!(self, TargetLanguage::Minifol | TargetLanguage::Clif)
    }
}

impl fmt::Display for TargetLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TargetLanguage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "minifol" => Ok(TargetLanguage::Minifol),
            "clif" => Ok(TargetLanguage::Clif),
            "cgif" => Ok(TargetLanguage::Cgif),
            "tfl" => Ok(TargetLanguage::Tfl),
            "tflplus" | "tfl+" => Ok(TargetLanguage::TflPlus),
            other => Err(format!("unknown target language `{other}`")),
        }
    }
}

impl Serialize for TargetLanguage {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for TargetLanguage {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

/// Any language a record can be rendered in: the natural-language column, the
/// source FOL annotations, or one of the transpiler targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DataLanguage {
    Nl,
    Fol,
    Target(TargetLanguage),
}

impl DataLanguage {
    pub fn as_str(&self) -> &'static str {
        match self {
            DataLanguage::Nl => "nl",
            DataLanguage::Fol => "fol",
            DataLanguage::Target(t) => t.as_str(),
        }
    }
}

impl fmt::Display for DataLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DataLanguage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "nl" => Ok(DataLanguage::Nl),
            "fol" => Ok(DataLanguage::Fol),
            other => other.parse::<TargetLanguage>().map(DataLanguage::Target),
        }
    }
}

impl Serialize for DataLanguage {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for DataLanguage {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}
