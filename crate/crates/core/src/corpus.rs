//! Raw name records, inclusion filters, birth-year assignment and cohort
//! assembly.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::standardize::{truncate_name, CodingTable, Sex, StandardName};
use crate::{Error, Result};

pub const MIN_RECORD_YEAR: i32 = 1000;
pub const MAX_RECORD_YEAR: i32 = 2100;
pub const MAX_AGE: u32 = 110;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RecordKind {
    Census,
    Marriage,
    AdultRoster,
    BirthRegister,
    Other,
}

impl RecordKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RecordKind::Census => "census",
            RecordKind::Marriage => "marriage",
            RecordKind::AdultRoster => "adult_roster",
            RecordKind::BirthRegister => "birth_register",
            RecordKind::Other => "other",
        }
    }

    pub fn parse(text: &str) -> Option<RecordKind> {
        Some(match text.trim() {
            "census" => RecordKind::Census,
            "marriage" => RecordKind::Marriage,
            "adult_roster" => RecordKind::AdultRoster,
            "birth_register" => RecordKind::BirthRegister,
            "other" => RecordKind::Other,
            _ => return None,
        })
    }
}

impl fmt::Display for RecordKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One observed given name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NameRecord {
    pub raw_name: String,
    pub sex: Sex,
    pub age: Option<u32>,
    pub record_year: i32,
    pub record_kind: RecordKind,
    pub location: Option<String>,
    pub native_born: Option<bool>,
}

impl NameRecord {
    pub fn new(raw_name: &str, sex: Sex, record_year: i32, record_kind: RecordKind) -> Self {
        NameRecord {
            raw_name: raw_name.into(),
            sex,
            age: None,
            record_year,
            record_kind,
            location: None,
            native_born: None,
        }
    }

    pub fn with_age(mut self, age: u32) -> Self {
        self.age = Some(age);
        self
    }

    pub fn with_native_born(mut self, native_born: bool) -> Self {
        self.native_born = Some(native_born);
        self
    }

    /// Checks the year and age ranges.
    pub fn validate(&self) -> Result<()> {
        if !(MIN_RECORD_YEAR..=MAX_RECORD_YEAR).contains(&self.record_year) {
            return Err(Error::RecordOutOfRange("record year"));
        }
        if self.age.is_some_and(|age| age > MAX_AGE) {
            return Err(Error::RecordOutOfRange("age"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterPolicy {
    pub drop_single_letter: bool,
    /// Upper-case truncated forms treated as placeholders rather than names.
    pub generic_names: BTreeSet<String>,
    pub require_native_born: bool,
}

impl Default for FilterPolicy {
    fn default() -> Self {
        FilterPolicy {
            drop_single_letter: true,
            generic_names: ["MR", "MRS", "WIDOW", "INFANT"]
                .into_iter()
                .map(String::from)
                .collect(),
            require_native_born: false,
        }
    }
}

impl FilterPolicy {
    /// Adds a generic name. It is truncated like any record name, so "Miss."
    /// and "MISS" are the same entry.
    pub fn with_generic(mut self, name: &str) -> Self {
        if let Ok(t) = truncate_name(name) {
            self.generic_names.insert(t);
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RejectReason {
    SingleLetter,
    Generic,
    NonNative,
    UnparseableSex,
    NoLeadingLetters,
}

impl RejectReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RejectReason::SingleLetter => "single_letter",
            RejectReason::Generic => "generic",
            RejectReason::NonNative => "non_native",
            RejectReason::UnparseableSex => "unparseable_sex",
            RejectReason::NoLeadingLetters => "no_leading_letters",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub record: NameRecord,
    pub reason: RejectReason,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FilterOutcome {
    pub kept: Vec<NameRecord>,
    pub rejected: Vec<Rejection>,
}

impl FilterOutcome {
    pub fn reason_counts(&self) -> BTreeMap<RejectReason, usize> {
        let mut counts = BTreeMap::new();
        for r in &self.rejected {
            *counts.entry(r.reason).or_insert(0) += 1;
        }
        counts
    }

    /// Appends another outcome, e.g. from a later chunk of the same file.
    pub fn extend(&mut self, other: FilterOutcome) {
        self.kept.extend(other.kept);
        self.rejected.extend(other.rejected);
    }
}

/// Why a single record would be dropped, if at all.
pub fn rejection_reason(
    record: &NameRecord,
    policy: &FilterPolicy,
    table: &CodingTable,
) -> Option<RejectReason> {
    let truncated = match truncate_name(&record.raw_name) {
        Ok(t) => t,
        Err(_) => return Some(RejectReason::NoLeadingLetters),
    };
    let single = truncated.chars().count() == 1;
    if single && policy.drop_single_letter {
        return Some(RejectReason::SingleLetter);
    }
    if policy.generic_names.contains(&truncated) {
        return Some(RejectReason::Generic);
    }
    if policy.require_native_born && record.native_born == Some(false) {
        return Some(RejectReason::NonNative);
    }
    if record.sex == Sex::Unknown {
        let corrected = table
            .apply_coding(&truncated)
            .map(|name| table.correct_sex(&name, Sex::Unknown))
            .unwrap_or(Sex::Unknown);
        if corrected == Sex::Unknown {
            return Some(RejectReason::UnparseableSex);
        }
    }
    None
}

/// Splits records into kept and rejected, preserving input order within each
/// side. Every input record ends up in exactly one of the two.
pub fn filter_records<I>(records: I, policy: &FilterPolicy, table: &CodingTable) -> FilterOutcome
where
    I: IntoIterator<Item = NameRecord>,
{
    let mut out = FilterOutcome::default();
    for record in records {
        match rejection_reason(&record, policy, table) {
            Some(reason) => out.rejected.push(Rejection { record, reason }),
            None => out.kept.push(record),
        }
    }
    out
}

/// A birth-year span for one sex, plus the ages assumed for records that
/// carry no age.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CohortSpec {
    pub sex: Sex,
    pub birth_year_start: i32,
    pub birth_year_end: i32,
    pub default_age_marriage: u32,
    pub default_age_adult: u32,
    /// Assumed age for census and other records without one. `None` makes
    /// such records unresolvable.
    pub default_age_other: Option<u32>,
}

impl CohortSpec {
    pub fn new(sex: Sex, birth_year_start: i32, birth_year_end: i32) -> Result<Self> {
        if birth_year_start > birth_year_end {
            return Err(Error::InvalidSpan {
                start: birth_year_start,
                end: birth_year_end,
            });
        }
        Ok(CohortSpec {
            sex,
            birth_year_start,
            birth_year_end,
            default_age_marriage: 25,
            default_age_adult: 35,
            default_age_other: None,
        })
    }

    pub fn contains(&self, birth_year: i32) -> bool {
        (self.birth_year_start..=self.birth_year_end).contains(&birth_year)
    }

    /// Sex and birth span only, ignoring the default ages.
    pub fn same_cohort(&self, other: &CohortSpec) -> bool {
        self.sex == other.sex
            && self.birth_year_start == other.birth_year_start
            && self.birth_year_end == other.birth_year_end
    }

    /// `1800-1809`, or `1800` for a single year.
    pub fn span_label(&self) -> String {
        if self.birth_year_start == self.birth_year_end {
            alloc::format!("{}", self.birth_year_start)
        } else {
            alloc::format!("{}-{}", self.birth_year_start, self.birth_year_end)
        }
    }
}

/// Age used for a record: the recorded age, else the default for its kind.
pub fn effective_age(record: &NameRecord, spec: &CohortSpec) -> Result<u32> {
    if let Some(age) = record.age {
        return Ok(age);
    }
    match record.record_kind {
        RecordKind::Marriage => Ok(spec.default_age_marriage),
        RecordKind::AdultRoster => Ok(spec.default_age_adult),
        RecordKind::BirthRegister => Ok(0),
        RecordKind::Census | RecordKind::Other => {
            spec.default_age_other.ok_or(Error::AgeUnresolvable)
        }
    }
}

pub fn assign_birth_year(record: &NameRecord, spec: &CohortSpec) -> Result<i32> {
    let age = effective_age(record, spec)?;
    Ok(record.record_year - age as i32)
}

/// Standardized names of one birth-year × sex population.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cohort {
    pub spec: CohortSpec,
    pub names: BTreeMap<StandardName, u64>,
    pub sample_size: u64,
    /// Matching-sex records skipped because no birth year could be assigned.
    pub unresolved: u64,
}

impl Cohort {
    pub fn empty(spec: CohortSpec) -> Self {
        Cohort {
            spec,
            names: BTreeMap::new(),
            sample_size: 0,
            unresolved: 0,
        }
    }

    pub fn from_counts<I>(spec: CohortSpec, counts: I) -> Self
    where
        I: IntoIterator<Item = (StandardName, u64)>,
    {
        let mut cohort = Cohort::empty(spec);
        for (name, n) in counts {
            cohort.add(name, n);
        }
        cohort
    }

    pub fn add(&mut self, name: StandardName, count: u64) {
        if count == 0 {
            return;
        }
        *self.names.entry(name).or_insert(0) += count;
        self.sample_size += count;
    }

    /// Multiset union; used to combine cohorts built from separate chunks.
    pub fn merge(&mut self, other: Cohort) {
        for (name, n) in other.names {
            self.add(name, n);
        }
        self.unresolved += other.unresolved;
    }

    pub fn is_empty(&self) -> bool {
        self.sample_size == 0
    }

    pub fn distinct(&self) -> usize {
        self.names.len()
    }
}

/// Collects the cohort described by `spec` from filtered records.
///
/// Each record is standardized, its sex corrected through the table and its
/// birth year assigned; only in-span records of the matching sex are counted.
pub fn build_cohort(records: &[NameRecord], spec: &CohortSpec, table: &CodingTable) -> Cohort {
    let mut cohort = Cohort::empty(*spec);
    for record in records {
        let Ok(name) = table.standardize(&record.raw_name) else {
            continue;
        };
        if table.correct_sex(&name, record.sex) != spec.sex {
            continue;
        }
        match assign_birth_year(record, spec) {
            Ok(year) if spec.contains(year) => cohort.add(name, 1),
            Ok(_) => {}
            Err(_) => cohort.unresolved += 1,
        }
    }
    cohort
}
