//! Ingestion → filtering → cohort assembly on a worker pool.

use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use onomast_core::corpus::{
    build_cohort, filter_records, Cohort, CohortSpec, FilterOutcome, FilterPolicy,
};
use onomast_core::standardize::CodingTable;
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::records::{parse_rows, read_rows, ParsedRecords};
use crate::{Error, Result};

const CHUNK: usize = 4096;

/// One input file after parsing and filtering.
#[derive(Debug, Clone)]
pub struct Source {
    pub label: String,
    pub parsed: ParsedRecords,
    pub filtered: FilterOutcome,
}

pub struct Pipeline {
    pub table: CodingTable,
    pub policy: FilterPolicy,
    pool: ThreadPool,
}

impl Pipeline {
    /// `threads = 0` uses rayon's default (one worker per core).
    pub fn new(table: CodingTable, policy: FilterPolicy, threads: usize) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))?;
        Ok(Pipeline {
            table,
            policy,
            pool,
        })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    pub fn ingest_reader<R: Read>(&self, label: &str, input: R) -> Result<Source> {
        let (rows, rejected) = read_rows(input)?;
        self.pool.install(|| {
            let parsed = parse_rows(rows, rejected);
            let chunks: Vec<FilterOutcome> = parsed
                .records
                .par_chunks(CHUNK)
                .map(|chunk| filter_records(chunk.iter().cloned(), &self.policy, &self.table))
                .collect();
            let mut filtered = FilterOutcome::default();
            for c in chunks {
                filtered.extend(c);
            }
            Ok(Source {
                label: label.to_owned(),
                parsed,
                filtered,
            })
        })
    }

    pub fn ingest_path(&self, path: &Path) -> Result<Source> {
        let label = path.display().to_string();
        let file = File::open(path).map_err(|e| Error::io(&label, e))?;
        self.ingest_reader(&label, BufReader::new(file))
    }

    /// Cohort from the kept records of `source`; chunks are built in parallel
    /// and merged as a multiset union.
    pub fn cohort(&self, source: &Source, spec: &CohortSpec) -> Cohort {
        self.pool.install(|| {
            source
                .filtered
                .kept
                .par_chunks(CHUNK)
                .map(|chunk| build_cohort(chunk, spec, &self.table))
                .reduce(
                    || Cohort::empty(*spec),
                    |mut a, b| {
                        a.merge(b);
                        a
                    },
                )
        })
    }

    /// Cohorts for several specs, in the order given.
    pub fn cohorts(&self, source: &Source, specs: &[CohortSpec]) -> Vec<Cohort> {
        specs.iter().map(|spec| self.cohort(source, spec)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use onomast_core::Sex;

    fn corpus() -> String {
        let mut s = String::from("name,sex,age,year,kind,location,native_born\n");
        for i in 0..20_000u32 {
            let name = [
                "Mary",
                "Maria",
                "Ann",
                "Sarah",
                "J",
                "Mrs",
                "Elizabeth",
                "Jane",
            ][(i % 8) as usize];
            let age = i % 30;
            s.push_str(&format!("{name},F,{age},1880,census,,\n"));
        }
        s
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let spec = CohortSpec::new(Sex::Female, 1860, 1879).unwrap();
        let input = corpus();
        let mut seen = Vec::new();
        for threads in [1, 3, 8] {
            let p = Pipeline::new(
                crate::coding::demo_table(),
                FilterPolicy::default(),
                threads,
            )
            .unwrap();
            let src = p.ingest_reader("mem", input.as_bytes()).unwrap();
            seen.push((src.filtered.clone(), p.cohort(&src, &spec)));
        }
        assert!(seen.windows(2).all(|w| w[0] == w[1]));
        let (filtered, cohort) = &seen[0];
        assert_eq!(filtered.rejected.len(), 5000);
        let expected = (0..20_000u32)
            .filter(|i| i % 8 < 2 && (1..=20).contains(&(i % 30)))
            .count() as u64;
        assert_eq!(
            cohort.names[&onomast_core::StandardName::new("MARY").unwrap()],
            expected
        );
    }
}
