//! Frequency tables, top-k popularity lists and the social information
//! statistic `I_s`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::corpus::{Cohort, CohortSpec};
use crate::math;
use crate::standardize::StandardName;
use crate::{Error, Result};

/// Default length of popularity lists.
pub const DEFAULT_K: usize = 10;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: BTreeMap<StandardName, u64>,
    sample_size: u64,
}

impl FrequencyTable {
    /// Builds a table from name counts, summing repeated names and dropping
    /// zero counts.
    pub fn from_counts<I>(counts: I) -> Self
    where
        I: IntoIterator<Item = (StandardName, u64)>,
    {
        let mut table = FrequencyTable::default();
        for (name, n) in counts {
            if n > 0 {
                *table.counts.entry(name).or_insert(0) += n;
                table.sample_size += n;
            }
        }
        table
    }

    pub fn sample_size(&self) -> u64 {
        self.sample_size
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sample_size == 0
    }

    pub fn count(&self, name: &str) -> u64 {
        self.counts.get(name).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<StandardName, u64> {
        &self.counts
    }

    /// Names by descending count, ties in ascending name order.
    pub fn ranked(&self) -> Vec<(&StandardName, u64)> {
        let mut ranked: Vec<_> = self.counts.iter().map(|(k, &v)| (k, v)).collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        ranked
    }

    /// Popularity of the least common observed name.
    pub fn min_popularity(&self) -> Option<f64> {
        let min = self.counts.values().min()?;
        Some(*min as f64 / self.sample_size as f64)
    }
}

pub fn frequency_table(cohort: &Cohort) -> FrequencyTable {
    FrequencyTable::from_counts(cohort.names.iter().map(|(k, &v)| (k.clone(), v)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopularityEntry {
    pub rank: usize,
    pub name: StandardName,
    pub popularity: f64,
}

/// The k most popular names of a sample with their sample frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct PopularityList {
    entries: Vec<PopularityEntry>,
}

impl PopularityList {
    /// Wraps a published ranking (e.g. a top-k list without the underlying
    /// sample). Popularities must be positive, non-increasing and sum to at
    /// most one.
    pub fn from_ranking<I>(ranking: I) -> Result<Self>
    where
        I: IntoIterator<Item = (StandardName, f64)>,
    {
        let entries: Vec<PopularityEntry> = ranking
            .into_iter()
            .enumerate()
            .map(|(i, (name, popularity))| PopularityEntry {
                rank: i + 1,
                name,
                popularity,
            })
            .collect();
        if entries.is_empty() {
            return Err(Error::InvalidParameter("empty ranking"));
        }
        if entries
            .iter()
            .any(|e| !(e.popularity > 0.0 && e.popularity <= 1.0))
        {
            return Err(Error::InvalidParameter("popularity outside (0, 1]"));
        }
        if entries
            .windows(2)
            .any(|w| w[1].popularity > w[0].popularity)
        {
            return Err(Error::InvalidParameter("ranking not non-increasing"));
        }
        let list = PopularityList { entries };
        if list.total() > 1.0 + 1e-12 {
            return Err(Error::InvalidParameter("ranking total exceeds one"));
        }
        Ok(list)
    }

    pub fn k(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[PopularityEntry] {
        &self.entries
    }

    pub fn popularities(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.popularity).collect()
    }

    pub fn names(&self) -> impl Iterator<Item = &StandardName> {
        self.entries.iter().map(|e| &e.name)
    }

    /// `T`, the summed popularity of the list.
    pub fn total(&self) -> f64 {
        math::sum(self.entries.iter().map(|e| e.popularity))
    }

    pub fn smallest(&self) -> f64 {
        self.entries.last().map_or(0.0, |e| e.popularity)
    }
}

pub fn top_k(table: &FrequencyTable, k: usize) -> Result<PopularityList> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive"));
    }
    if table.distinct() < k {
        return Err(Error::InsufficientDistinctNames {
            needed: k,
            found: table.distinct(),
        });
    }
    let n = table.sample_size() as f64;
    let entries = table
        .ranked()
        .into_iter()
        .take(k)
        .enumerate()
        .map(|(i, (name, count))| PopularityEntry {
            rank: i + 1,
            name: name.clone(),
            popularity: count as f64 / n,
        })
        .collect();
    Ok(PopularityList { entries })
}

/// `I_s = log2(k) - H(q)` for `q_j = p_j / T`: zero for equal popularities,
/// approaching `log2(k)` as the list concentrates on one name.
pub fn information_of(popularities: &[f64]) -> f64 {
    let k = popularities.len();
    if k <= 1 {
        return 0.0;
    }
    let total = math::sum(popularities.iter().copied());
    let neg_entropy = math::sum(popularities.iter().map(|&p| {
        let q = p / total;
        if q > 0.0 {
            q * math::log2(q)
        } else {
            0.0
        }
    }));
    // Rounding can push a uniform list a hair below zero.
    (math::log2(k as f64) + neg_entropy).max(0.0)
}

pub fn social_information(list: &PopularityList) -> f64 {
    information_of(&list.popularities())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopularitySummary {
    pub cohort: CohortSpec,
    pub k: usize,
    pub top_name: StandardName,
    pub top_pop: f64,
    pub topk_pop: f64,
    pub info_is: f64,
    pub sample_size: u64,
    pub new_topk: Option<f64>,
}

pub fn summarize(cohort: &Cohort, k: usize) -> Result<PopularitySummary> {
    if cohort.is_empty() {
        return Err(Error::EmptyTable);
    }
    let table = frequency_table(cohort);
    let list = top_k(&table, k)?;
    Ok(PopularitySummary {
        cohort: cohort.spec,
        k,
        top_name: list.entries[0].name.clone(),
        top_pop: list.entries[0].popularity,
        topk_pop: list.total(),
        info_is: social_information(&list),
        sample_size: table.sample_size(),
        new_topk: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingVariability {
    /// Expected count, `n p`.
    pub expected: f64,
    /// Binomial standard deviation of the count.
    pub sd: f64,
    /// `sd / n` as a fraction of the sample.
    pub sd_fraction: f64,
}

/// Binomial sampling variability of one name's count.
pub fn sampling_variability(p: f64, n: u64) -> Result<SamplingVariability> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter("p must lie in (0, 1)"));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("sample size must be positive"));
    }
    let n = n as f64;
    let sd = math::sqrt(n * p * (1.0 - p));
    Ok(SamplingVariability {
        expected: n * p,
        sd,
        sd_fraction: sd / n,
    })
}

/// Order-independent mean: values are summed in sorted order.
pub(crate) fn mean(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.into_iter().collect();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    math::sum(v) / n
}

/// Statistics that can be averaged across sources describing the same cohort.
pub trait Averageable: Sized {
    fn average(items: &[Self]) -> Result<Self>;
}

/// Unweighted field-by-field mean of at least two summaries or results.
pub fn average_summaries<T: Averageable>(items: &[T]) -> Result<T> {
    if items.len() < 2 {
        return Err(Error::TooFewInputs);
    }
    T::average(items)
}

impl Averageable for PopularitySummary {
    fn average(items: &[Self]) -> Result<Self> {
        let first = &items[0];
        for s in items {
            if !s.cohort.same_cohort(&first.cohort) {
                return Err(Error::MismatchedInputs("cohort spec"));
            }
            if s.k != first.k {
                return Err(Error::MismatchedInputs("k"));
            }
        }
        let largest = items
            .iter()
            .max_by(|a, b| {
                a.sample_size
                    .cmp(&b.sample_size)
                    .then_with(|| b.top_name.cmp(&a.top_name))
            })
            .expect("non-empty");
        let new_topk = if items.iter().all(|s| s.new_topk.is_some()) {
            Some(mean(items.iter().filter_map(|s| s.new_topk)))
        } else {
            None
        };
        Ok(PopularitySummary {
            cohort: first.cohort,
            k: first.k,
            top_name: largest.top_name.clone(),
            top_pop: mean(items.iter().map(|s| s.top_pop)),
            topk_pop: mean(items.iter().map(|s| s.topk_pop)),
            info_is: mean(items.iter().map(|s| s.info_is)),
            sample_size: math::round(mean(items.iter().map(|s| s.sample_size as f64))) as u64,
            new_topk,
        })
    }
}

/// Share of the sample carrying `name`; zero when absent.
pub fn name_popularity(table: &FrequencyTable, name: &str) -> Result<f64> {
    if table.is_empty() {
        return Err(Error::EmptyTable);
    }
    Ok(table.count(name) as f64 / table.sample_size() as f64)
}
