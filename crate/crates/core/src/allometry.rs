//! Species-family allometric equations for per-tree aboveground biomass.
//!
//! Four published equations for tropical agroforestry, one per family class,
//! all driven by diameter at breast height (DBH) in centimeters and returning
//! dry aboveground biomass in kilograms:
//!
//! * fruit trees:   `AGB = 10^(-0.834 + 2.223 * log10(DBH))`
//! * banana trees:  `AGB = 0.030 * DBH^2.13`
//! * cacao:         `AGB = 0.1208 * DBH^1.98`
//! * shade timber:  `AGB = 21.3 - 6.95 * DBH + 0.74 * DBH^2`
//!
//! Each equation is evaluated as published for every positive DBH; the timber
//! quadratic is non-monotonic below 4.696 cm, which callers may surface as a
//! warning ([`timber_small_dbh`]) instead of clamping.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// DBH below which the timber equation sits in its non-monotonic region.
pub const TIMBER_SMALL_DBH_CM: f64 = 5.0;

#[derive(Debug, Error, PartialEq)]
pub enum AllometryError {
    /// DBH must be a finite, strictly positive number of centimeters.
    #[error("invalid dbh_cm {0}: must be finite and > 0")]
    InvalidDbh(f64),
    /// No mapping rule matched the species text.
    #[error("species {0:?} is not mapped to a family class; add a rule to the family mapping")]
    UnmappedSpecies(String),
    /// Two or more rules matched the species text with different families.
    #[error("species {species:?} matches conflicting family rules: {families}")]
    AmbiguousSpecies { species: String, families: String },
    /// The text is not one of the four family class names.
    #[error("unknown family class {0:?}; expected one of fruit, musacea, cacao, timber")]
    UnknownFamily(String),
    /// A mapping file line could not be parsed.
    #[error("bad family mapping rule at line {line}: {reason}")]
    BadMappingRule { line: usize, reason: String },
    /// The species text to classify was empty.
    #[error("cannot classify an empty species string")]
    EmptySpecies,
}

/// The four species families the allometric equations cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyClass {
    Fruit,
    Musacea,
    Cacao,
    Timber,
}

impl FamilyClass {
    pub const ALL: [FamilyClass; 4] = [
        FamilyClass::Fruit,
        FamilyClass::Musacea,
        FamilyClass::Cacao,
        FamilyClass::Timber,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyClass::Fruit => "fruit",
            FamilyClass::Musacea => "musacea",
            FamilyClass::Cacao => "cacao",
            FamilyClass::Timber => "timber",
        }
    }
}

impl fmt::Display for FamilyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyClass {
    type Err = AllometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fruit" => Ok(FamilyClass::Fruit),
            "musacea" => Ok(FamilyClass::Musacea),
            "cacao" => Ok(FamilyClass::Cacao),
            "timber" => Ok(FamilyClass::Timber),
            _ => Err(AllometryError::UnknownFamily(s.to_string())),
        }
    }
}

/// One tree's computed biomass, tied back to its field record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeAgb {
    pub record_id: String,
    pub family: FamilyClass,
    pub dbh_cm: f64,
    pub agb_kg: f64,
}

impl TreeAgb {
    pub fn compute(
        record_id: impl Into<String>,
        family: FamilyClass,
        dbh_cm: f64,
    ) -> Result<Self, AllometryError> {
        Ok(TreeAgb {
            record_id: record_id.into(),
            family,
            dbh_cm,
            agb_kg: tree_agb(family, dbh_cm)?,
        })
    }
}

fn check_dbh(dbh_cm: f64) -> Result<(), AllometryError> {
    if !dbh_cm.is_finite() || dbh_cm <= 0.0 {
        return Err(AllometryError::InvalidDbh(dbh_cm));
    }
    Ok(())
}

/// Fruit-tree AGB in kg: `10^(-0.834 + 2.223 * log10(dbh_cm))`.
pub fn agb_fruit(dbh_cm: f64) -> Result<f64, AllometryError> {
    check_dbh(dbh_cm)?;
    Ok(10f64.powf(-0.834 + 2.223 * dbh_cm.log10()))
}

/// Banana-tree AGB in kg: `0.030 * dbh_cm^2.13`.
pub fn agb_musacea(dbh_cm: f64) -> Result<f64, AllometryError> {
    check_dbh(dbh_cm)?;
    Ok(0.030 * dbh_cm.powf(2.13))
}

/// Cacao AGB in kg: `0.1208 * dbh_cm^1.98`.
pub fn agb_cacao(dbh_cm: f64) -> Result<f64, AllometryError> {
    check_dbh(dbh_cm)?;
    Ok(0.1208 * dbh_cm.powf(1.98))
}

/// Shade-timber AGB in kg: `21.3 - 6.95 * dbh_cm + 0.74 * dbh_cm^2`.
///
/// The discriminant of the quadratic is negative, so the result is positive
/// for every DBH, but the curve decreases until 4.696 cm; see
/// [`timber_small_dbh`].
pub fn agb_timber(dbh_cm: f64) -> Result<f64, AllometryError> {
    check_dbh(dbh_cm)?;
    Ok(21.3 - 6.95 * dbh_cm + 0.74 * dbh_cm * dbh_cm)
}

/// True when a timber record falls in the equation's non-monotonic region
/// and deserves a warning on the site result.
pub fn timber_small_dbh(family: FamilyClass, dbh_cm: f64) -> bool {
    family == FamilyClass::Timber && dbh_cm < TIMBER_SMALL_DBH_CM
}

/// Per-tree AGB in kg for any family, dispatching to the family's equation.
pub fn tree_agb(family: FamilyClass, dbh_cm: f64) -> Result<f64, AllometryError> {
    match family {
        FamilyClass::Fruit => agb_fruit(dbh_cm),
        FamilyClass::Musacea => agb_musacea(dbh_cm),
        FamilyClass::Cacao => agb_cacao(dbh_cm),
        FamilyClass::Timber => agb_timber(dbh_cm),
    }
}

/// Keyword table mapping species text to a family class.
///
/// A rule matches when its keyword equals the whole species string or occurs
/// as a substring, case-insensitively. Exact matches win over substring
/// matches; conflicting substring matches are an error rather than a silent
/// pick. Unmapped species always fail loudly.
#[derive(Debug, Clone)]
pub struct FamilyMapping {
    rules: Vec<(String, FamilyClass)>,
}

impl Default for FamilyMapping {
    fn default() -> Self {
        Self::builtin()
    }
}

impl FamilyMapping {
    /// Built-in defaults cover only the families with unambiguous names:
    /// musaceae/musa/banana and cacao/cocoa/theobroma. Everything else must
    /// come from a user mapping file.
    pub fn builtin() -> Self {
        let rules = [
            ("musaceae", FamilyClass::Musacea),
            ("musa", FamilyClass::Musacea),
            ("banana", FamilyClass::Musacea),
            ("cacao", FamilyClass::Cacao),
            ("cocoa", FamilyClass::Cacao),
            ("theobroma", FamilyClass::Cacao),
        ];
        FamilyMapping {
            rules: rules
                .iter()
                .map(|(k, f)| (k.to_string(), *f))
                .collect(),
        }
    }

    pub fn empty() -> Self {
        FamilyMapping { rules: Vec::new() }
    }

    /// Parses override rules (`keyword=family`, `#` comments, blank lines
    /// ignored) and appends them to the built-in defaults. A user keyword
    /// equal to a built-in keyword replaces the built-in rule.
    pub fn with_overrides(text: &str) -> Result<Self, AllometryError> {
        let mut mapping = Self::builtin();
        mapping.merge_rules(text)?;
        Ok(mapping)
    }

    fn merge_rules(&mut self, text: &str) -> Result<(), AllometryError> {
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.split_once('#') {
                Some((before, _)) => before.trim(),
                None => raw_line.trim(),
            };
            if line.is_empty() {
                continue;
            }
            let (keyword, family) =
                line.split_once('=')
                    .ok_or_else(|| AllometryError::BadMappingRule {
                        line: line_no,
                        reason: format!("expected keyword=family, got {line:?}"),
                    })?;
            let keyword = keyword.trim().to_lowercase();
            if keyword.is_empty() {
                return Err(AllometryError::BadMappingRule {
                    line: line_no,
                    reason: "empty keyword".to_string(),
                });
            }
            let family = FamilyClass::from_str(family).map_err(|e| {
                AllometryError::BadMappingRule {
                    line: line_no,
                    reason: e.to_string(),
                }
            })?;
            self.rules.retain(|(k, _)| *k != keyword);
            self.rules.push((keyword, family));
        }
        Ok(())
    }

    /// Case-insensitive keyword lookup of a species string.
    pub fn classify(&self, species_text: &str) -> Result<FamilyClass, AllometryError> {
        let needle = species_text.trim().to_lowercase();
        if needle.is_empty() {
            return Err(AllometryError::EmptySpecies);
        }
        if let Some((_, family)) = self.rules.iter().find(|(k, _)| *k == needle) {
            return Ok(*family);
        }
        let mut matched: BTreeMap<FamilyClass, ()> = BTreeMap::new();
        for (keyword, family) in &self.rules {
            if needle.contains(keyword.as_str()) {
                matched.insert(*family, ());
            }
        }
        match matched.len() {
            0 => Err(AllometryError::UnmappedSpecies(species_text.to_string())),
            1 => Ok(*matched.keys().next().expect("len checked")),
            _ => Err(AllometryError::AmbiguousSpecies {
                species: species_text.to_string(),
                families: matched
                    .keys()
                    .map(|f| f.name())
                    .collect::<Vec<_>>()
                    .join(", "),
            }),
        }
    }
}

/// Convenience wrapper matching the operation name used elsewhere.
pub fn classify_family(
    species_text: &str,
    mapping: &FamilyMapping,
) -> Result<FamilyClass, AllometryError> {
    mapping.classify(species_text)
}
