//! Floating-point orbit patterns for smooth maps.
//!
//! Sampling only ever shows that a pattern is realized; a pattern missing
//! from a sample is not thereby forbidden.

use std::collections::BTreeSet;

use num::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::perm::{reduce, PatternSet, Permutation};
use crate::pwl::PwlMap;

#[derive(Clone, Debug, PartialEq)]
struct FloatPiece {
    lo: f64,
    hi: f64,
    lo_closed: bool,
    hi_closed: bool,
    slope: f64,
    intercept: f64,
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Logistic(f64),
    OneMinusXSquared,
    Pwl(Vec<FloatPiece>),
}

/// A self-map of `[0, 1]` evaluated in double precision.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericMap {
    kind: Kind,
}

impl NumericMap {
    /// `x ↦ r x (1 − x)` for `1 < r ≤ 4`.
    pub fn logistic(r: f64) -> Result<Self> {
        if !(r > 1.0 && r <= 4.0) {
            return Err(Error::BadParameter(format!("logistic parameter r = {r} not in (1, 4]")));
        }
        NumericMap { kind: Kind::Logistic(r) }.checked()
    }

    /// `x ↦ 1 − x²`.
    pub fn one_minus_x_squared() -> Self {
        NumericMap { kind: Kind::OneMinusXSquared }
    }

    /// Floating-point view of an exact piecewise-linear map.
    pub fn from_pwl(map: &PwlMap) -> Result<Self> {
        let f = |q: &crate::pwl::Rational| q.to_f64().unwrap_or(f64::NAN);
        let pieces = map
            .pieces()
            .iter()
            .map(|p| FloatPiece {
                lo: f(&p.domain.lo),
                hi: f(&p.domain.hi),
                lo_closed: p.domain.lo_closed,
                hi_closed: p.domain.hi_closed,
                slope: f(&p.form.slope),
                intercept: f(&p.form.intercept),
            })
            .collect();
        NumericMap { kind: Kind::Pwl(pieces) }.checked()
    }

    fn checked(self) -> Result<Self> {
        const GRID: u32 = 1000;
        for j in 0..=GRID {
            let x = f64::from(j) / f64::from(GRID);
            let y = self.eval(x);
            if !(0.0..=1.0).contains(&y) {
                return Err(Error::Validation(format!("image escape: f({x}) = {y}")));
            }
        }
        Ok(self)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::Logistic(r) => r * x * (1.0 - x),
            Kind::OneMinusXSquared => 1.0 - x * x,
            Kind::Pwl(pieces) => {
                let piece = pieces
                    .iter()
                    .find(|p| {
                        (if p.lo_closed { x >= p.lo } else { x > p.lo })
                            && (if p.hi_closed { x <= p.hi } else { x < p.hi })
                    })
                    .or(pieces.last())
                    .expect("maps have at least one piece");
                (piece.slope * x + piece.intercept).clamp(0.0, 1.0)
            }
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            Kind::Logistic(r) => format!("logistic:{r}"),
            Kind::OneMinusXSquared => "one_minus_x_squared".into(),
            Kind::Pwl(p) => format!("pwl ({} pieces, floating point)", p.len()),
        }
    }
}

/// Sampling plan for [`sampled_allowed`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampleConfig {
    pub grid_count: u64,
    pub random_count: u64,
    pub seed: u64,
    pub tie_epsilon: f64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { grid_count: 100_000, random_count: 100_000, seed: 1, tie_epsilon: 1e-12 }
    }
}

impl SampleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tie_epsilon.is_nan() || self.tie_epsilon <= 0.0 {
            return Err(Error::BadParameter(format!("tie_epsilon must be positive, got {}", self.tie_epsilon)));
        }
        Ok(())
    }
}

/// Pattern of the first `n` orbit values starting at `x`.
pub fn pattern_at(map: &NumericMap, x: f64, n: usize, tie_epsilon: f64) -> Result<Permutation> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfDomain(x.to_string()));
    }
    if n == 0 {
        return Err(Error::BadParameter("n must be at least 1".into()));
    }
    let mut orbit = Vec::with_capacity(n);
    let mut y = x;
    for _ in 0..n {
        orbit.push(y);
        y = map.eval(y);
    }
    let mut sorted: Vec<(f64, usize)> = orbit.iter().copied().zip(0..).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in sorted.windows(2) {
        if w[1].0 - w[0].0 < tie_epsilon {
            let (a, b) = (w[0].1.min(w[1].1), w[0].1.max(w[1].1));
            return Err(Error::TieDetected { first: a, second: b });
        }
    }
    reduce(&orbit)
}

/// Index of the random stream consumed by sample `i`; each `f64` takes two
/// 32-bit words of the ChaCha keystream.
const WORDS_PER_SAMPLE: u128 = 2;
const CHUNK: u64 = 4096;

/// Patterns observed over a deterministic grid plus seeded random points.
/// A lower bound on the allowed set.
pub fn sampled_allowed(map: &NumericMap, n: usize, cfg: &SampleConfig) -> Result<PatternSet> {
    cfg.validate()?;
    if n == 0 {
        return Err(Error::BadParameter("n must be at least 1".into()));
    }
    let grid_chunks = cfg.grid_count.div_ceil(CHUNK);
    let random_chunks = cfg.random_count.div_ceil(CHUNK);
    let denom = (cfg.grid_count + 1) as f64;

    let collect = |xs: &mut dyn Iterator<Item = f64>| {
        let mut seen = BTreeSet::new();
        for x in xs {
            if let Ok(p) = pattern_at(map, x, n, cfg.tie_epsilon) {
                seen.insert(p);
            }
        }
        seen
    };

    let grid = (0..grid_chunks).into_par_iter().map(|c| {
        let start = c * CHUNK + 1;
        let end = ((c + 1) * CHUNK).min(cfg.grid_count);
        collect(&mut (start..=end).map(|j| j as f64 / denom))
    });
    let random = (0..random_chunks).into_par_iter().map(|c| {
        let start = c * CHUNK;
        let len = CHUNK.min(cfg.random_count - start);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_word_pos(u128::from(start) * WORDS_PER_SAMPLE);
        collect(&mut (0..len).map(|_| rng.random::<f64>()))
    });
    let members = grid
        .chain(random)
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    Ok(PatternSet::from_members(n, members))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn words(set: &PatternSet) -> Vec<String> {
        set.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn pattern_at_examples() {
        let l4 = NumericMap::logistic(4.0).unwrap();
        assert_eq!(pattern_at(&l4, 0.8, 4, 1e-12).unwrap(), p("3241"));
        let g = NumericMap::one_minus_x_squared();
        assert_eq!(pattern_at(&g, 0.5, 3, 1e-12).unwrap(), p("231"));
        let tent = NumericMap::from_pwl(&PwlMap::tent()).unwrap();
        assert!(matches!(pattern_at(&tent, 1.0 / 3.0, 3, 1e-12), Err(Error::TieDetected { .. })));
        assert!(matches!(pattern_at(&g, 1.5, 3, 1e-12), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn construction_checks() {
        assert!(NumericMap::logistic(4.5).is_err());
        assert!(NumericMap::logistic(1.0).is_err());
        assert!(NumericMap::logistic(f64::NAN).is_err());
        assert!(NumericMap::logistic(2.5).is_ok());
    }

    #[test]
    fn sampled_examples() {
        let cfg = SampleConfig::default();
        let l4 = NumericMap::logistic(4.0).unwrap();
        assert_eq!(words(&sampled_allowed(&l4, 3, &cfg).unwrap()), ["123", "132", "213", "231", "312"]);
        let g = NumericMap::one_minus_x_squared();
        assert_eq!(words(&sampled_allowed(&g, 3, &cfg).unwrap()), ["213", "231"]);
        let l2 = NumericMap::logistic(2.0).unwrap();
        assert_eq!(words(&sampled_allowed(&l2, 3, &cfg).unwrap()), ["123", "312"]);
    }

    #[test]
    fn empty_and_invalid_configs() {
        let g = NumericMap::one_minus_x_squared();
        let empty = SampleConfig { grid_count: 0, random_count: 0, ..SampleConfig::default() };
        assert!(sampled_allowed(&g, 3, &empty).unwrap().is_empty());
        let bad = SampleConfig { tie_epsilon: 0.0, ..SampleConfig::default() };
        assert!(sampled_allowed(&g, 3, &bad).is_err());
    }

    #[test]
    fn random_stream_is_partition_independent() {
        // drawing sample i directly must match drawing it sequentially
        let mut seq = ChaCha8Rng::seed_from_u64(7);
        let draws: Vec<f64> = (0..10).map(|_| seq.random::<f64>()).collect();
        for (i, want) in draws.iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            rng.set_word_pos(i as u128 * WORDS_PER_SAMPLE);
            assert_eq!(rng.random::<f64>(), *want);
        }
    }
}
