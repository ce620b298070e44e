//! Log-log rank-frequency fits and log-linear popularity models.
//!
//! A log-linear model gives rank `j` the popularity `a · j^b` with `b ≤ 0`.
//! Models are pinned down either by the top name's popularity and the top-k
//! total, or by the social information of the top-k list and its total; both
//! reduce to a monotone equation in `b`, solved by bisection.

use alloc::vec::Vec;

use crate::commstats::{comm_from_pair, AlignedPair, CommResult};
use crate::math;
use crate::popstats::{information_of, FrequencyTable};
use crate::{Error, Result};

/// Names seen fewer times than this are left out of fits by default.
pub const DEFAULT_MIN_COUNT: u64 = 5;
/// Bisection bracket for model exponents.
pub const EXPONENT_BRACKET: (f64, f64) = (-20.0, 0.0);
const BRACKET_WIDTH: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub slope: f64,
    /// In log2-popularity units.
    pub intercept: f64,
    pub r_squared: f64,
    pub points_used: usize,
    pub min_count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares of `y` on `x`.
pub fn fit_line(points: &[(f64, f64)]) -> Result<LineFit> {
    if points.len() < 3 {
        return Err(Error::InsufficientPoints {
            needed: 3,
            found: points.len(),
        });
    }
    let n = points.len() as f64;
    let mx = math::sum(points.iter().map(|p| p.0)) / n;
    let my = math::sum(points.iter().map(|p| p.1)) / n;
    let sxx = math::sum(points.iter().map(|p| (p.0 - mx) * (p.0 - mx)));
    let sxy = math::sum(points.iter().map(|p| (p.0 - mx) * (p.1 - my)));
    let syy = math::sum(points.iter().map(|p| (p.1 - my) * (p.1 - my)));
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("all x values equal"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res = math::sum(points.iter().map(|p| {
        let r = p.1 - (intercept + slope * p.0);
        r * r
    }));
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(LineFit {
        slope,
        intercept,
        r_squared,
    })
}

/// `(log2 rank, log2 popularity)` for names with at least `min_count`
/// occurrences, in rank order, optionally cut at `max_rank`.
pub fn rank_frequency_series(
    table: &FrequencyTable,
    min_count: u64,
    max_rank: Option<usize>,
) -> Vec<(f64, f64)> {
    let n = table.sample_size() as f64;
    table
        .ranked()
        .into_iter()
        .take(max_rank.unwrap_or(usize::MAX))
        .take_while(|&(_, count)| count >= min_count)
        .enumerate()
        .map(|(i, (_, count))| (math::log2((i + 1) as f64), math::log2(count as f64 / n)))
        .collect()
}

pub fn fit_rank_frequency(table: &FrequencyTable, min_count: u64) -> Result<PowerLawFit> {
    fit_rank_frequency_top(table, min_count, None)
}

/// As [`fit_rank_frequency`], restricted to the `max_rank` most popular names.
pub fn fit_rank_frequency_top(
    table: &FrequencyTable,
    min_count: u64,
    max_rank: Option<usize>,
) -> Result<PowerLawFit> {
    let series = rank_frequency_series(table, min_count, max_rank);
    let line = fit_line(&series)?;
    Ok(PowerLawFit {
        slope: line.slope,
        intercept: line.intercept,
        r_squared: line.r_squared,
        points_used: series.len(),
        min_count,
    })
}

/// Root of a monotone function on `[lo, hi]`, which must change sign (or
/// vanish) across the bracket. Stops once the bracket is narrower than
/// `width`.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, width: f64) -> Option<f64>
where
    F: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return None;
    }
    while hi - lo > width {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(lo + 0.5 * (hi - lo))
}

/// Popularities `a · j^b` for ranks `1..=k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLinearModel {
    pub k: usize,
    pub exponent: f64,
    /// Popularity at rank 1.
    pub scale: f64,
}

impl LogLinearModel {
    pub fn popularity(&self, rank: usize) -> f64 {
        self.scale * math::powf(rank as f64, self.exponent)
    }

    pub fn popularities(&self) -> Vec<f64> {
        (1..=self.k).map(|j| self.popularity(j)).collect()
    }

    pub fn total(&self) -> f64 {
        math::sum((1..=self.k).map(|j| self.popularity(j)))
    }

    pub fn information(&self) -> f64 {
        information_of(&self.popularities())
    }
}

fn rank_power_sum(k: usize, b: f64) -> f64 {
    math::sum((1..=k).map(|j| math::powf(j as f64, b)))
}

fn shape_information(k: usize, b: f64) -> f64 {
    let weights: Vec<f64> = (1..=k).map(|j| math::powf(j as f64, b)).collect();
    information_of(&weights)
}

/// Model with top popularity `top_pop` whose `k` names total `total`.
pub fn solve_from_top_constraints(top_pop: f64, total: f64, k: usize) -> Result<LogLinearModel> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive"));
    }
    if !(top_pop > 0.0 && top_pop <= 1.0) || !(total > 0.0 && total <= 1.0) {
        return Err(Error::InvalidParameter("popularities must lie in (0, 1]"));
    }
    let upper = k as f64 * top_pop;
    if total < top_pop - RESIDUAL_TOL || total > upper + RESIDUAL_TOL {
        return Err(Error::Infeasible("total outside [top, k * top]"));
    }
    let model = |b| LogLinearModel {
        k,
        exponent: b,
        scale: top_pop,
    };
    let excess = |b: f64| top_pop * rank_power_sum(k, b) - total;
    if k == 1 || excess(0.0) <= RESIDUAL_TOL * 1e-2 {
        if k == 1 && (total - top_pop).abs() > RESIDUAL_TOL {
            return Err(Error::Infeasible("k = 1 requires total = top"));
        }
        return Ok(model(0.0));
    }
    let (lo, hi) = EXPONENT_BRACKET;
    if excess(lo) > 0.0 {
        return Err(Error::Degenerate);
    }
    let b = bisect(excess, lo, hi, BRACKET_WIDTH).ok_or(Error::Degenerate)?;
    let m = model(b);
    if (m.total() - total).abs() >= RESIDUAL_TOL {
        return Err(Error::Degenerate);
    }
    Ok(m)
}

/// Model whose top-k list carries `info_is` bits of social information and
/// totals `total`.
pub fn solve_from_info_constraints(info_is: f64, total: f64, k: usize) -> Result<LogLinearModel> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive"));
    }
    if !(total > 0.0 && total <= 1.0) {
        return Err(Error::InvalidParameter("total must lie in (0, 1]"));
    }
    let ceiling = math::log2(k as f64);
    if !(info_is >= 0.0 && info_is < ceiling) {
        return Err(Error::Infeasible("information outside [0, log2 k)"));
    }
    let b = if info_is == 0.0 {
        0.0
    } else {
        let gap = |b: f64| shape_information(k, b) - info_is;
        let (lo, hi) = EXPONENT_BRACKET;
        if gap(lo) < 0.0 {
            return Err(Error::Degenerate);
        }
        bisect(gap, lo, hi, BRACKET_WIDTH).ok_or(Error::Degenerate)?
    };
    Ok(LogLinearModel {
        k,
        exponent: b,
        scale: total / rank_power_sum(k, b),
    })
}

/// Year-2 constraints: popularity of the top name and of the top-k list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopConstraints {
    pub top_pop: f64,
    pub total: f64,
}

/// Year-1 constraints on year 2's top names: their information and total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoConstraints {
    pub info_is: f64,
    pub total: f64,
}

/// Parameters of the 1066–1166 model: top name 10%, top ten 45% in 1166;
/// those ten names held 4.5% in 1066 with 0.4 bits of information.
pub const CONQUEST_YEAR2: TopConstraints = TopConstraints {
    top_pop: 0.10,
    total: 0.45,
};
pub const CONQUEST_YEAR1: InfoConstraints = InfoConstraints {
    info_is: 0.4,
    total: 0.045,
};

#[derive(Debug, Clone, PartialEq)]
pub struct ModelComparison {
    pub year2: LogLinearModel,
    pub year1: LogLinearModel,
    pub pair: AlignedPair,
    pub result: CommResult,
}

/// Communication between two fitted models, matched rank for rank.
///
/// Year 2's top names are assumed entirely new relative to year 1's top list,
/// so the new-name count is `k`. `t11` is year 1's own top-k total, which the
/// models do not determine.
pub fn conquest_model(
    year2: TopConstraints,
    year1: InfoConstraints,
    t11: f64,
    k: usize,
) -> Result<ModelComparison> {
    let m2 = solve_from_top_constraints(year2.top_pop, year2.total, k)?;
    let m1 = solve_from_info_constraints(year1.info_is, year1.total, k)?;
    if t11.is_nan() || t11 > 1.0 || t11 < m1.total() - RESIDUAL_TOL {
        return Err(Error::Infeasible("t11 must lie in [year-1 total, 1]"));
    }
    let pair = AlignedPair::from_popularities(m1.popularities(), m2.popularities(), Some(t11))?;
    let result = comm_from_pair(&pair, k as f64, None)?;
    Ok(ModelComparison {
        year2: m2,
        year1: m1,
        pair,
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standardize::StandardName;
    use alloc::format;
    use proptest::prelude::*;

    fn synthetic_table(k: usize, exponent: f64, top: u64) -> FrequencyTable {
        FrequencyTable::from_counts((1..=k).map(|j| {
            let name = format!(
                "N{}{}",
                (b'A' + (j / 26) as u8) as char,
                (b'A' + (j % 26) as u8) as char
            );
            let count = (top as f64 * (j as f64).powf(exponent)).round() as u64;
            (StandardName::new(&name).unwrap(), count)
        }))
    }

    /// Closed-form simple regression with std floats.
    fn oracle_ols(points: &[(f64, f64)]) -> (f64, f64) {
        let n = points.len() as f64;
        let sx: f64 = points.iter().map(|p| p.0).sum();
        let sy: f64 = points.iter().map(|p| p.1).sum();
        let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
        let syy: f64 = points.iter().map(|p| p.1 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let r = (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt());
        (slope, r * r)
    }

    #[test]
    fn exact_power_laws_fit_exactly() {
        // Counts 720720 / j are integers for j ≤ 16.
        let t = FrequencyTable::from_counts((1..=16u64).map(|j| {
            (
                StandardName::new(&format!("N{}", (b'A' + j as u8) as char)).unwrap(),
                720_720 / j,
            )
        }));
        let fit = fit_rank_frequency(&t, DEFAULT_MIN_COUNT).unwrap();
        assert!((fit.slope + 1.0).abs() < 1e-9);
        assert!((fit.r_squared - 1.0).abs() < 1e-9);
        assert_eq!(fit.points_used, 16);

        // Popularities exactly proportional to j^-0.5.
        let direct: alloc::vec::Vec<(f64, f64)> = (1..=8)
            .map(|j| ((j as f64).log2(), (0.2 * (j as f64).powf(-0.5)).log2()))
            .collect();
        let line = fit_line(&direct).unwrap();
        assert!((line.slope + 0.5).abs() < 1e-12);
        assert!((line.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn perturbed_fit_matches_oracle() {
        let t = synthetic_table(40, -0.8, 5000);
        let mut counts: alloc::vec::Vec<_> =
            t.counts().iter().map(|(k, &v)| (k.clone(), v)).collect();
        for (i, c) in counts.iter_mut().enumerate() {
            c.1 += (i as u64 * 7919) % 13;
        }
        let t = FrequencyTable::from_counts(counts);
        let fit = fit_rank_frequency(&t, 5).unwrap();
        let series = rank_frequency_series(&t, 5, None);
        let (slope, r2) = oracle_ols(&series);
        assert!((fit.slope - slope).abs() < 1e-10);
        assert!((fit.r_squared - r2).abs() < 1e-10);
    }

    #[test]
    fn min_count_and_point_checks() {
        let t = synthetic_table(10, -1.0, 20);
        let fit = fit_rank_frequency(&t, 5).unwrap();
        assert!(fit.points_used < 10);
        assert_eq!(fit.min_count, 5);
        assert!(matches!(
            fit_rank_frequency(&t, 15),
            Err(Error::InsufficientPoints { .. })
        ));
        let top = fit_rank_frequency_top(&t, 1, Some(4)).unwrap();
        assert_eq!(top.points_used, 4);
    }

    #[test]
    fn top_constraint_solutions() {
        let m = solve_from_top_constraints(0.10, 0.45, 10).unwrap();
        assert!((m.total() - 0.45).abs() < 1e-10);
        assert_eq!(m.scale, 0.10);
        assert!((m.exponent + 0.5907654775252423).abs() < 1e-9);

        let uniform = solve_from_top_constraints(0.10, 1.0, 10).unwrap();
        assert_eq!(uniform.exponent, 0.0);
        assert_eq!(
            solve_from_top_constraints(0.10, 0.10, 10),
            Err(Error::Degenerate)
        );
        assert!(matches!(
            solve_from_top_constraints(0.10, 1.01, 10),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            solve_from_top_constraints(0.10, 0.05, 10),
            Err(Error::Infeasible(_))
        ));
        assert!(solve_from_top_constraints(0.3, 0.3, 1).is_ok());
    }

    #[test]
    fn info_constraint_solutions() {
        let m = solve_from_info_constraints(0.0, 0.5, 10).unwrap();
        assert_eq!(m.exponent, 0.0);
        assert!(m.popularities().iter().all(|&p| (p - 0.05).abs() < 1e-15));

        let m = solve_from_info_constraints(0.4, 0.045, 10).unwrap();
        assert!((m.information() - 0.4).abs() < 1e-9);
        assert!((m.total() - 0.045).abs() < 1e-12);
        assert!((m.exponent + 0.9489475092526769).abs() < 1e-9);

        let zipf = solve_from_info_constraints(0.445, 1.0, 10).unwrap();
        assert!((zipf.exponent + 0.9994791600942898).abs() < 1e-9);

        assert!(matches!(
            solve_from_info_constraints(10f64.log2(), 0.5, 10),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn conquest_row() {
        let cmp = conquest_model(CONQUEST_YEAR2, CONQUEST_YEAR1, 0.75, 10).unwrap();
        let r = &cmp.result;
        assert!((r.c1 - 1.083).abs() < 0.005);
        assert!((r.c4 - 982.0).abs() < 5.0);
        assert_eq!(r.new_topk, 10.0);
        assert!((r.c2 - 0.056).abs() < 0.005);
        assert!((r.c3 - (r.c2 + (0.75f64 / cmp.pair.t21).log2())).abs() < 1e-9);
        assert!(conquest_model(CONQUEST_YEAR2, CONQUEST_YEAR1, 0.01, 10).is_err());
    }

    #[test]
    fn bisection_contract() {
        let root = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((root - 2f64.sqrt()).abs() < 1e-12);
        assert!(bisect(|x| x * x + 1.0, 0.0, 2.0, 1e-12).is_none());
    }

    #[test]
    fn steeper_slopes_carry_more_information() {
        for k in [2usize, 5, 10, 50] {
            let mut prev = -1.0;
            for step in 0..=200 {
                let b = -(step as f64) * 0.05;
                let i = shape_information(k, b);
                assert!(i > prev || (step == 0 && i == 0.0), "k={k} b={b}");
                prev = i;
            }
        }
    }

    proptest! {
        #[test]
        fn model_round_trip(k in 3usize..60, b in -3.0f64..-0.01, top in 0.01f64..0.5) {
            let m = LogLinearModel { k, exponent: b, scale: top };
            let points: alloc::vec::Vec<(f64, f64)> = m
                .popularities()
                .iter()
                .enumerate()
                .map(|(i, &p)| (((i + 1) as f64).log2(), p.log2()))
                .collect();
            let fit = fit_line(&points).unwrap();
            prop_assert!((fit.slope - b).abs() < 1e-6);
            prop_assert!(fit.r_squared > 1.0 - 1e-9);
        }

        #[test]
        fn info_solver_reproduces_target(k in 2usize..30, frac in 0.0f64..0.95, total in 0.01f64..1.0) {
            let target = frac * (k as f64).log2();
            let m = solve_from_info_constraints(target, total, k).unwrap();
            prop_assert!((m.information() - target).abs() < 1e-9);
            prop_assert!((m.total() - total).abs() < 1e-12);
            prop_assert!(m.exponent <= 0.0);
        }

        #[test]
        fn top_solver_meets_constraints(k in 2usize..30, top in 0.01f64..0.5, frac in 0.05f64..1.0) {
            let upper = (k as f64 * top).min(1.0);
            let total = top + frac * (upper - top);
            let m = solve_from_top_constraints(top, total, k).unwrap();
            prop_assert!((m.total() - total).abs() < 1e-10);
            prop_assert_eq!(m.scale, top);
        }
    }
}
