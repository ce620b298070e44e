//! Communication statistics between two cohorts: the relative-entropy
//! measures C1–C3, the weighted absolute change C4, and new-name turnover.
//!
//! Year 2's top-k names define the comparison. For each of them the year-1
//! popularity is looked up; a name never observed in year 1 is given half the
//! popularity of the least common name that was observed, so every ratio stays
//! finite.
//!
//! All logarithms are base 2, so C1–C3 are in bits.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::corpus::Cohort;
use crate::math;
use crate::popstats::{frequency_table, mean, top_k, Averageable, FrequencyTable, PopularityList};
use crate::standardize::StandardName;
use crate::{Error, Result};

/// Where the year-1 fallback popularity came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    /// Smallest observed popularity in the full year-1 sample.
    Sample,
    /// Smallest entry of a published year-1 top-k list.
    TopList,
    /// Popularities supplied directly (model-based pairs); no fallback.
    Model,
}

/// Year-2 top names with their popularities in both years.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedPair {
    /// Year-2 top names in rank order. Empty for model-based pairs.
    pub names: Vec<StandardName>,
    pub p2: Vec<f64>,
    pub p1: Vec<f64>,
    pub fallback_used: Vec<bool>,
    /// Year-2 total of year 2's top names.
    pub t22: f64,
    /// Year-1 total of year 2's top names.
    pub t21: f64,
    /// Year-1 total of year 1's own top names.
    pub t11: Option<f64>,
    pub baseline: Baseline,
}

impl AlignedPair {
    /// Builds a pair from rank-matched popularities, e.g. from two fitted
    /// models.
    pub fn from_popularities(p1: Vec<f64>, p2: Vec<f64>, t11: Option<f64>) -> Result<Self> {
        if p1.len() != p2.len() {
            return Err(Error::LengthMismatch {
                left: p1.len(),
                right: p2.len(),
            });
        }
        if p1.is_empty() {
            return Err(Error::InvalidParameter("empty popularity lists"));
        }
        if p1.iter().chain(&p2).any(|&p| !(p > 0.0 && p <= 1.0)) {
            return Err(Error::InvalidParameter("popularity outside (0, 1]"));
        }
        let t21 = math::sum(p1.iter().copied());
        let t22 = math::sum(p2.iter().copied());
        if t21 > 1.0 + 1e-12 || t22 > 1.0 + 1e-12 {
            return Err(Error::InvalidParameter("popularity total exceeds one"));
        }
        Ok(AlignedPair {
            names: Vec::new(),
            fallback_used: alloc::vec![false; p1.len()],
            p1,
            p2,
            t22,
            t21,
            t11,
            baseline: Baseline::Model,
        })
    }

    pub fn k(&self) -> usize {
        self.p2.len()
    }

    pub fn fallback_count(&self) -> usize {
        self.fallback_used.iter().filter(|&&f| f).count()
    }

    pub fn with_t11(mut self, t11: f64) -> Self {
        self.t11 = Some(t11);
        self
    }
}

fn check_same_k(list1: &PopularityList, list2: &PopularityList) -> Result<()> {
    if list1.k() != list2.k() {
        return Err(Error::LengthMismatch {
            left: list1.k(),
            right: list2.k(),
        });
    }
    Ok(())
}

fn build_pair<F>(
    list1: &PopularityList,
    list2: &PopularityList,
    baseline: Baseline,
    fallback: f64,
    lookup: F,
) -> AlignedPair
where
    F: Fn(&StandardName) -> Option<f64>,
{
    let k = list2.k();
    let mut pair = AlignedPair {
        names: Vec::with_capacity(k),
        p2: Vec::with_capacity(k),
        p1: Vec::with_capacity(k),
        fallback_used: Vec::with_capacity(k),
        t22: list2.total(),
        t21: 0.0,
        t11: Some(list1.total()),
        baseline,
    };
    for entry in list2.entries() {
        let (p1, used) = match lookup(&entry.name) {
            Some(p) => (p, false),
            None => (fallback, true),
        };
        pair.names.push(entry.name.clone());
        pair.p2.push(entry.popularity);
        pair.p1.push(p1);
        pair.fallback_used.push(used);
    }
    pair.t21 = math::sum(pair.p1.iter().copied());
    pair
}

/// Aligns year 2's top list against the full year-1 sample.
pub fn align(
    list1: &PopularityList,
    table1: &FrequencyTable,
    list2: &PopularityList,
) -> Result<AlignedPair> {
    check_same_k(list1, list2)?;
    let min = table1.min_popularity().ok_or(Error::EmptyTable)?;
    let n1 = table1.sample_size() as f64;
    Ok(build_pair(
        list1,
        list2,
        Baseline::Sample,
        0.5 * min,
        |name| match table1.count(name.as_str()) {
            0 => None,
            c => Some(c as f64 / n1),
        },
    ))
}

/// Aligns against a year-1 top-k list when the full sample is unavailable.
/// Missing names get half the list's smallest popularity.
pub fn align_to_list(list1: &PopularityList, list2: &PopularityList) -> Result<AlignedPair> {
    check_same_k(list1, list2)?;
    let fallback = 0.5 * list1.smallest();
    Ok(build_pair(
        list1,
        list2,
        Baseline::TopList,
        fallback,
        |name| {
            list1
                .entries()
                .iter()
                .find(|e| &e.name == name)
                .map(|e| e.popularity)
        },
    ))
}

/// `Σ p2_j log2(p2_j / p1_j)` over the aligned names.
fn weighted_log_ratio(pair: &AlignedPair, weight_scale: f64) -> f64 {
    math::sum(
        pair.p2
            .iter()
            .zip(&pair.p1)
            .map(|(&p2, &p1)| (p2 / weight_scale) * math::log2(p2 / p1)),
    )
}

/// Relative entropy of the year-2 top names plus an "other names" cell.
pub fn comm_c1(pair: &AlignedPair) -> Result<f64> {
    let top = weighted_log_ratio(pair, 1.0);
    let other2 = (1.0 - pair.t22).max(0.0);
    let other1 = (1.0 - pair.t21).max(0.0);
    let rest = if other2 == 0.0 {
        0.0
    } else if other1 == 0.0 {
        return Err(Error::DivergentOtherMass);
    } else {
        other2 * math::log2(other2 / other1)
    };
    Ok(top + rest)
}

/// Relative entropy of the year-2 top names, each year normalized to its own
/// total over those names.
pub fn comm_c2(pair: &AlignedPair) -> f64 {
    weighted_log_ratio(pair, pair.t22) + math::log2(pair.t21 / pair.t22)
}

/// Like C2 but normalizing year 1 by its own top-k total, which credits names
/// that entered the top list.
pub fn comm_c3(pair: &AlignedPair) -> Result<f64> {
    let t11 = pair.t11.ok_or(Error::T11Required)?;
    Ok(weighted_log_ratio(pair, pair.t22) + math::log2(t11 / pair.t22))
}

/// Weighted average absolute percentage change of the year-2 top names.
pub fn comm_c4(pair: &AlignedPair) -> f64 {
    100.0
        * math::sum(
            pair.p2
                .iter()
                .zip(&pair.p1)
                .map(|(&p2, &p1)| (p2 / pair.t22) * libm::fabs(p2 / p1 - 1.0)),
        )
}

/// Names on the year-2 list missing from the year-1 list.
pub fn new_names(list1: &PopularityList, list2: &PopularityList) -> Result<usize> {
    check_same_k(list1, list2)?;
    let before: BTreeSet<&StandardName> = list1.names().collect();
    Ok(list2.names().filter(|n| !before.contains(n)).count())
}

pub fn turnover_per_annum(new_count: f64, years: f64) -> Result<f64> {
    if years.is_nan() || years <= 0.0 {
        return Err(Error::InvalidYears);
    }
    Ok(new_count / years)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommResult {
    pub k: usize,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// Percent.
    pub c4: f64,
    /// Fractional once results are averaged.
    pub new_topk: f64,
    pub years_elapsed: Option<f64>,
    pub turnover_pa: Option<f64>,
    /// Year-2 top names whose year-1 popularity was imputed.
    pub fallback_count: usize,
}

/// All statistics for an aligned pair. C3 requires `pair.t11`.
pub fn comm_from_pair(
    pair: &AlignedPair,
    new_topk: f64,
    years_elapsed: Option<f64>,
) -> Result<CommResult> {
    let turnover_pa = years_elapsed
        .map(|y| turnover_per_annum(new_topk, y))
        .transpose()?;
    Ok(CommResult {
        k: pair.k(),
        c1: comm_c1(pair)?,
        c2: comm_c2(pair),
        c3: comm_c3(pair)?,
        c4: comm_c4(pair),
        new_topk,
        years_elapsed,
        turnover_pa,
        fallback_count: pair.fallback_count(),
    })
}

/// Compares two frequency tables over their top `k` names.
pub fn comm_tables(
    table1: &FrequencyTable,
    table2: &FrequencyTable,
    k: usize,
    years_elapsed: Option<f64>,
    t11_override: Option<f64>,
) -> Result<(CommResult, AlignedPair)> {
    let list1 = top_k(table1, k)?;
    let list2 = top_k(table2, k)?;
    let mut pair = align(&list1, table1, &list2)?;
    if let Some(t11) = t11_override {
        pair.t11 = Some(t11);
    }
    let new = new_names(&list1, &list2)? as f64;
    let result = comm_from_pair(&pair, new, years_elapsed)?;
    Ok((result, pair))
}

/// Communication from `cohort1` (year 1) to `cohort2` (year 2).
pub fn comm_all(
    cohort1: &Cohort,
    cohort2: &Cohort,
    k: usize,
    years_elapsed: Option<f64>,
    t11_override: Option<f64>,
) -> Result<CommResult> {
    let t1 = frequency_table(cohort1);
    let t2 = frequency_table(cohort2);
    comm_tables(&t1, &t2, k, years_elapsed, t11_override).map(|(r, _)| r)
}

impl Averageable for CommResult {
    fn average(items: &[Self]) -> Result<Self> {
        let first = &items[0];
        if items.iter().any(|r| r.k != first.k) {
            return Err(Error::MismatchedInputs("k"));
        }
        if items.iter().any(|r| r.years_elapsed != first.years_elapsed) {
            return Err(Error::MismatchedInputs("years elapsed"));
        }
        let new_topk = mean(items.iter().map(|r| r.new_topk));
        let turnover_pa = first
            .years_elapsed
            .map(|y| turnover_per_annum(new_topk, y))
            .transpose()?;
        Ok(CommResult {
            k: first.k,
            c1: mean(items.iter().map(|r| r.c1)),
            c2: mean(items.iter().map(|r| r.c2)),
            c3: mean(items.iter().map(|r| r.c3)),
            c4: mean(items.iter().map(|r| r.c4)),
            new_topk,
            years_elapsed: first.years_elapsed,
            turnover_pa,
            fallback_count: items.iter().map(|r| r.fallback_count).sum(),
        })
    }
}
