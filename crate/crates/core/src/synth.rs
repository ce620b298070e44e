//! Synthetic name corpora from a Simon urn: each birth either coins a new
//! name or copies the name of a uniformly chosen earlier birth, so a name is
//! copied in proportion to how common it already is.
//!
//! This is a test-data generator. Nothing here models historical naming.

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Cohort, CohortSpec};
use crate::standardize::{Sex, StandardName};
use crate::{Error, Result};

/// Identifier of the random stream, recorded alongside simulated output.
pub const RNG_ALGORITHM: &str = "chacha8";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    /// Probability that a birth receives a fresh name.
    pub innovation_rate: f64,
    pub births: usize,
    /// Distinct names given to the first births before copying starts.
    pub initial_names: usize,
    pub seed: u64,
    pub sex: Sex,
    pub birth_year: i32,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            innovation_rate: 0.1,
            births: 50_000,
            initial_names: 1,
            seed: 7,
            sex: Sex::Female,
            birth_year: 1900,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.innovation_rate) {
            return Err(Error::InvalidParameter(
                "innovation rate must lie in [0, 1]",
            ));
        }
        if self.births == 0 {
            return Err(Error::InvalidParameter("births must be positive"));
        }
        if self.initial_names == 0 {
            return Err(Error::InvalidParameter("initial names must be positive"));
        }
        Ok(())
    }
}

/// The `index`-th fresh name: `AA`, `AB`, ..., `ZZ`, `AAA`, ... (bijective
/// base 26, skipping single letters). Unique for every index and at most
/// eight letters for any index a simulation can reach.
pub fn fresh_name(index: usize) -> StandardName {
    let mut n = index + 27;
    let mut letters = Vec::new();
    while n > 0 {
        n -= 1;
        letters.push((b'A' + (n % 26) as u8) as char);
        n /= 26;
    }
    let text: String = letters.into_iter().rev().collect();
    StandardName::new(&text).expect("generated names are valid")
}

/// Name of each birth, in birth order.
pub fn simulate_births(config: &SimulationConfig) -> Result<Vec<StandardName>> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let seeds = config.initial_names.min(config.births);
    // Births store indices into `names`; names are materialized at the end.
    let mut birth_names: Vec<usize> = (0..seeds).collect();
    let mut next_fresh = seeds;
    birth_names.reserve(config.births - seeds);
    for t in seeds..config.births {
        let innovate = rng.gen::<f64>() < config.innovation_rate;
        let id = if innovate {
            next_fresh += 1;
            next_fresh - 1
        } else {
            birth_names[rng.gen_range(0..t)]
        };
        birth_names.push(id);
    }
    Ok(birth_names.into_iter().map(fresh_name).collect())
}

/// Simulated cohort for `config.sex` born in `config.birth_year`.
pub fn simulate_naming(config: &SimulationConfig) -> Result<Cohort> {
    let spec = CohortSpec::new(config.sex, config.birth_year, config.birth_year)?;
    let mut cohort = Cohort::empty(spec);
    for name in simulate_births(config)? {
        cohort.add(name, 1);
    }
    Ok(cohort)
}
