//! Name identity: the eight-letter truncation rule and table-driven coding of
//! variants onto canonical names.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::String;
use core::borrow::Borrow;
use core::fmt;

use crate::{Error, Result};

/// Longest standardized name, in characters.
pub const MAX_NAME_LEN: usize = 8;
/// Shortest standardized name; single letters are abbreviations.
pub const MIN_NAME_LEN: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sex {
    Female,
    Male,
    Unknown,
}

impl Sex {
    /// One-letter file code: `F`, `M` or `U`.
    pub fn code(self) -> char {
        match self {
            Sex::Female => 'F',
            Sex::Male => 'M',
            Sex::Unknown => 'U',
        }
    }

    pub fn from_code(code: &str) -> Option<Sex> {
        match code.trim() {
            "F" | "f" => Some(Sex::Female),
            "M" | "m" => Some(Sex::Male),
            "U" | "u" => Some(Sex::Unknown),
            _ => None,
        }
    }
}

impl fmt::Display for Sex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// Cuts a raw given name down to the letters used for name identity.
///
/// The result is the upper-cased prefix that stops at the eighth letter or at
/// the first character that is not a letter (period, space, hyphen,
/// apostrophe, digit, ...), whichever comes first. Surrounding whitespace is
/// ignored.
///
/// ```
/// use onomast_core::standardize::truncate_name;
/// assert_eq!(truncate_name("Elizabeth").unwrap(), "ELIZABET");
/// assert_eq!(truncate_name("Mary A").unwrap(), "MARY");
/// assert_eq!(truncate_name("Anne-Marie").unwrap(), "ANNE");
/// ```
pub fn truncate_name(raw: &str) -> Result<String> {
    let mut out = String::new();
    let mut len = 0;
    'chars: for c in raw.trim().chars() {
        if !c.is_alphabetic() {
            break;
        }
        for upper in c.to_uppercase() {
            // Case mapping can emit combining marks; stop there so the result
            // stays purely alphabetic.
            if len == MAX_NAME_LEN || !upper.is_alphabetic() {
                break 'chars;
            }
            out.push(upper);
            len += 1;
        }
    }
    if out.is_empty() {
        return Err(Error::NoLeadingLetters(raw.to_owned()));
    }
    Ok(out)
}

/// A coded name: 2–8 letters, upper-case.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StandardName(String);

impl StandardName {
    pub fn new(text: &str) -> Result<Self> {
        let len = text.chars().count();
        let shape_ok = (MIN_NAME_LEN..=MAX_NAME_LEN).contains(&len)
            && text.chars().all(|c| c.is_alphabetic() && !c.is_lowercase());
        if shape_ok {
            Ok(StandardName(text.to_owned()))
        } else {
            Err(Error::InvalidStandardName(text.to_owned()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for StandardName {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StandardName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodingEntry {
    pub canonical: StandardName,
    pub sex_override: Option<Sex>,
}

/// Variant → canonical name mapping with optional sex corrections.
///
/// Tables are validated on construction: variants are unique after case
/// folding, every canonical name is a fixed point (coding twice equals coding
/// once), and the variants of one canonical name agree on its sex override.
#[derive(Debug, Clone, Default)]
pub struct CodingTable {
    version_id: String,
    entries: BTreeMap<String, CodingEntry>,
    sex_overrides: BTreeMap<StandardName, Sex>,
}

fn fold(text: &str) -> String {
    text.trim().chars().flat_map(char::to_uppercase).collect()
}

impl CodingTable {
    /// The identity coding.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_entries<'a, I>(version_id: &str, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str, Option<Sex>)>,
    {
        let mut entries = BTreeMap::new();
        for (variant, canonical, sex_override) in rows {
            let key = fold(variant);
            StandardName::new(&key)?;
            let canonical = StandardName::new(&fold(canonical))?;
            let entry = CodingEntry {
                canonical,
                sex_override,
            };
            if entries.insert(key.clone(), entry).is_some() {
                return Err(Error::DuplicateKey(key));
            }
        }

        let mut sex_overrides = BTreeMap::new();
        for (variant, entry) in &entries {
            if let Some(next) = entries.get(entry.canonical.as_str()) {
                if next.canonical != entry.canonical {
                    return Err(Error::NotFixedPoint {
                        variant: variant.clone(),
                        canonical: entry.canonical.as_str().to_owned(),
                    });
                }
            }
            if let Some(sex) = entry.sex_override {
                match sex_overrides.insert(entry.canonical.clone(), sex) {
                    Some(prev) if prev != sex => {
                        return Err(Error::ConflictingSexOverride(
                            entry.canonical.as_str().to_owned(),
                        ))
                    }
                    _ => {}
                }
            }
        }

        Ok(CodingTable {
            version_id: version_id.to_owned(),
            entries,
            sex_overrides,
        })
    }

    pub fn version_id(&self) -> &str {
        &self.version_id
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, variant: &str) -> Option<&CodingEntry> {
        self.entries.get(variant)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &CodingEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Codes a truncated name. Names missing from the table code to
    /// themselves.
    pub fn apply_coding(&self, truncated: &str) -> Result<StandardName> {
        let key = fold(truncated);
        if key.chars().count() < MIN_NAME_LEN {
            return Err(Error::SingleLetter(key));
        }
        match self.entries.get(&key) {
            Some(entry) => Ok(entry.canonical.clone()),
            None => StandardName::new(&key),
        }
    }

    /// Replaces the recorded sex when the table marks the name as
    /// sex-unambiguous.
    pub fn correct_sex(&self, name: &StandardName, recorded: Sex) -> Sex {
        self.sex_overrides.get(name).copied().unwrap_or(recorded)
    }

    /// Truncation followed by coding.
    pub fn standardize(&self, raw: &str) -> Result<StandardName> {
        self.apply_coding(&truncate_name(raw)?)
    }
}
