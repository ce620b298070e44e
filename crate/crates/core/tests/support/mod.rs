//! Literal-formula oracles and random inputs shared by integration tests.
//!
//! Everything here is written straight from the definitions with plain
//! `f64` arithmetic and no shared code with the library, so agreement is
//! evidence rather than tautology.

#![allow(dead_code)]

use rand::Rng;

/// Name counts for one year, in no particular order.
pub type Counts = Vec<(String, u64)>;

pub fn information(p: &[f64]) -> f64 {
    let k = p.len() as f64;
    let total: f64 = p.iter().sum();
    let mut entropy = 0.0;
    for &pj in p {
        let q = pj / total;
        if q > 0.0 {
            entropy -= q * q.log2();
        }
    }
    k.log2() - entropy
}

/// `None` when year 1 leaves no mass outside the aligned names but year 2 does.
pub fn c1(p1: &[f64], p2: &[f64]) -> Option<f64> {
    let t21: f64 = p1.iter().sum();
    let t22: f64 = p2.iter().sum();
    let mut c = 0.0;
    for (a, b) in p1.iter().zip(p2) {
        c += b * (b / a).log2();
    }
    let (o1, o2) = (1.0 - t21, 1.0 - t22);
    if o2 > 0.0 {
        if o1 <= 0.0 {
            return None;
        }
        c += o2 * (o2 / o1).log2();
    }
    Some(c)
}

pub fn c2(p1: &[f64], p2: &[f64]) -> f64 {
    let t21: f64 = p1.iter().sum();
    normalized_kl(p1, p2, t21)
}

pub fn c3(p1: &[f64], p2: &[f64], t11: f64) -> f64 {
    normalized_kl(p1, p2, t11)
}

fn normalized_kl(p1: &[f64], p2: &[f64], year1_total: f64) -> f64 {
    let t22: f64 = p2.iter().sum();
    let mut c = 0.0;
    for (a, b) in p1.iter().zip(p2) {
        let (q2, q1) = (b / t22, a / year1_total);
        c += q2 * (q2 / q1).log2();
    }
    c
}

pub fn c4(p1: &[f64], p2: &[f64]) -> f64 {
    let t22: f64 = p2.iter().sum();
    let mut c = 0.0;
    for (a, b) in p1.iter().zip(p2) {
        c += (b / t22) * ((b - a).abs() / a);
    }
    100.0 * c
}

/// Top `k` by descending count, ties by ascending name.
pub fn top(counts: &Counts, k: usize) -> Vec<(String, u64)> {
    let mut v: Vec<_> = counts.iter().filter(|(_, c)| *c > 0).cloned().collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    v.truncate(k);
    v
}

/// Year-1 and year-2 popularities of year 2's top `k`, the fallback flags,
/// year 1's own top-`k` total, and both top-`k` popularity lists.
pub struct OraclePair {
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
    pub fallback: Vec<bool>,
    pub t11: f64,
    pub list1: Vec<f64>,
    pub new_names: usize,
}

pub fn pair(year1: &Counts, year2: &Counts, k: usize) -> OraclePair {
    let n1: u64 = year1.iter().map(|c| c.1).sum();
    let n2: u64 = year2.iter().map(|c| c.1).sum();
    let min1 = year1.iter().map(|c| c.1).filter(|&c| c > 0).min().unwrap();
    let top1 = top(year1, k);
    let top2 = top(year2, k);
    let mut out = OraclePair {
        p1: vec![],
        p2: vec![],
        fallback: vec![],
        t11: top1.iter().map(|c| c.1 as f64 / n1 as f64).sum(),
        list1: top1.iter().map(|c| c.1 as f64 / n1 as f64).collect(),
        new_names: 0,
    };
    for (name, c2) in &top2 {
        out.p2.push(*c2 as f64 / n2 as f64);
        match year1.iter().find(|(n, c)| n == name && *c > 0) {
            Some((_, c1)) => {
                out.p1.push(*c1 as f64 / n1 as f64);
                out.fallback.push(false);
            }
            None => {
                out.p1.push(min1 as f64 / n1 as f64 / 2.0);
                out.fallback.push(true);
            }
        }
        if !top1.iter().any(|(n, _)| n == name) {
            out.new_names += 1;
        }
    }
    out
}

/// Two-letter names `BA`, `BB`, ... so that none collides with a coding table.
pub fn name(i: usize) -> String {
    let a = (b'B' + (i / 26) as u8) as char;
    let b = (b'A' + (i % 26) as u8) as char;
    format!("{a}{b}")
}

/// Random year pair with at least `k` observed names each; year 2 may
/// contain names absent from year 1.
pub fn random_years<R: Rng>(rng: &mut R) -> (Counts, Counts, usize) {
    let k = rng.gen_range(1..=12);
    let pool = rng.gen_range(k + 1..=k + 20);
    loop {
        let mut y1 = Counts::new();
        let mut y2 = Counts::new();
        for i in 0..pool {
            let c1 = if rng.gen_bool(0.25) {
                0
            } else {
                rng.gen_range(1..200)
            };
            let c2 = if rng.gen_bool(0.25) {
                0
            } else {
                rng.gen_range(1..200)
            };
            if c1 > 0 {
                y1.push((name(i), c1));
            }
            if c2 > 0 {
                y2.push((name(i), c2));
            }
        }
        if y1.len() >= k && y2.len() >= k {
            return (y1, y2, k);
        }
    }
}

/// Random aligned popularities, each side summing to less than one.
pub fn random_popularities<R: Rng>(rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let k = rng.gen_range(1..=15);
    let draw = |rng: &mut R| {
        let w: Vec<f64> = (0..k).map(|_| rng.gen_range(0.01..1.0)).collect();
        let scale = rng.gen_range(0.05..0.99) / w.iter().sum::<f64>();
        w.into_iter().map(|x| x * scale).collect::<Vec<_>>()
    };
    let p1 = draw(rng);
    let p2 = draw(rng);
    (p1, p2)
}

pub fn close(actual: f64, expected: f64, tol: f64) -> bool {
    (actual - expected).abs() <= tol * expected.abs().max(1.0)
}
