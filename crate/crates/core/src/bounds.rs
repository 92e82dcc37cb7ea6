//! Upper bounds on the shortest forbidden pattern, the permutation families
//! that certify them, and necessary conditions for an antichain to be the
//! basic forbidden set of a piecewise monotone map.

use num::{BigUint, One};
use serde::Serialize;

use crate::perm::{Antichain, Permutation};
use crate::pwl::{Orientation, PwlMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Components of `{f < x}`; bound `2k + 2`.
    Simple,
    /// Escaping monotonicity intervals; bound `2k + 3`.
    Refined,
}

impl std::str::FromStr for Method {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "simple" => Ok(Method::Simple),
            "refined" => Ok(Method::Refined),
            other => Err(crate::Error::BadParameter(format!("method `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub k: usize,
    pub bound: usize,
    pub method: Method,
    pub orientation: Orientation,
}

pub fn shortest_bound(map: &PwlMap, method: Method, orientation: Orientation) -> BoundReport {
    let (k, bound) = match method {
        Method::Simple => {
            let k = map.diagonal_components(orientation).len();
            (k, 2 * k + 2)
        }
        Method::Refined => {
            let k = map.refined_k(orientation);
            (k, 2 * k + 3)
        }
    };
    BoundReport { k, bound, method, orientation }
}

/// Which certificate family [`in_e`] tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    /// Three conditions; lives in the forbidden set once `n ≥ 2k + 3`.
    E,
    /// First two conditions only; forbidden once `n ≥ 2k + 2`.
    EPrime,
}

/// Membership of `pi` in the certificate family for `k`.
///
/// Positions are 1-based: some start `i` with `i + k + 1 ≤ n` must satisfy
/// 1. every `j` in `i..i+k` has an ascent bottom `π(ℓ) < π(ℓ+1)` with
///    `π(j) > π(ℓ) > π(j+1)`;
/// 2. `π(i+k) > π(i+k+1)`;
/// 3. (`E` only) some `h > i+k+1` has `π(h) > π(i+k+1)`.
pub fn in_e(pi: &Permutation, k: usize, variant: Variant) -> bool {
    let w = pi.entries();
    let n = w.len();
    // 0-based: value at 1-based position q is w[q - 1]
    let at = |q: usize| w[q - 1];
    // ascent bottoms: values π(ℓ) with π(ℓ) < π(ℓ+1)
    let bottoms: Vec<u8> = (1..n).filter(|&l| at(l) < at(l + 1)).map(at).collect();
    let bridged = |j: usize| bottoms.iter().any(|&b| at(j) > b && b > at(j + 1));

    (1..).take_while(|&i| i + k < n).any(|i| {
        (i..i + k).all(bridged)
            && at(i + k) > at(i + k + 1)
            && match variant {
                Variant::EPrime => true,
                Variant::E => (i + k + 2..=n).any(|h| at(h) > at(i + k + 1)),
            }
    })
}

/// The explicit member of the family: `(2k+2)(2k)…4 2 1 3 5…(2k+1)(2k+3)`
/// for `E`, `3 5…(2k+1)(2k+2)(2k)…4 2 1` for `E′`.
pub fn witness(k: usize, variant: Variant) -> Permutation {
    let evens_down = (1..=k + 1).rev().map(|t| 2 * t);
    let word: Vec<usize> = match variant {
        Variant::E => evens_down.chain([1]).chain((1..=k + 1).map(|t| 2 * t + 1)).collect(),
        Variant::EPrime => (1..=k)
            .map(|t| 2 * t + 1)
            .chain([2 * k + 2])
            .chain((1..=k).rev().map(|t| 2 * t))
            .chain([1])
            .collect(),
    };
    Permutation::from_slice(&word).expect("witness words are permutations")
}

/// Counting test for a finite antichain with sorted lengths `k_1 ≤ … ≤ k_m`:
/// with `ℓ = ⌊k_1/2⌋`, a basic forbidden set of a piecewise monotone map must
/// satisfy `Σ k_i ≥ ℓ! + m(ℓ − 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AntichainCheck {
    pub lengths: Vec<usize>,
    pub ell: usize,
    #[serde(serialize_with = "as_decimal")]
    pub lhs: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub rhs: BigUint,
    pub satisfied: bool,
}

fn as_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn prop6_check(lengths: &[usize]) -> crate::Result<AntichainCheck> {
    if lengths.is_empty() {
        return Err(crate::Error::BadParameter("need at least one length".into()));
    }
    if let Some(bad) = lengths.iter().find(|&&k| k < 2) {
        return Err(crate::Error::BadParameter(format!("pattern lengths must be >= 2, got {bad}")));
    }
    let mut lengths = lengths.to_vec();
    lengths.sort_unstable();
    let ell = lengths[0] / 2;
    let lhs: BigUint = lengths.iter().map(|&k| BigUint::from(k)).sum();
    let rhs = factorial(ell) + BigUint::from(lengths.len()) * BigUint::from(ell - 1);
    let satisfied = lhs >= rhs;
    Ok(AntichainCheck { lengths, ell, lhs, rhs, satisfied })
}

/// `(rℓ)! / (ℓ!)^r`, the number of ways to split `1..=rℓ` into `r` labelled
/// blocks of size `ℓ`.
pub fn multinomial_growth(ell: usize, r: usize) -> crate::Result<BigUint> {
    if ell == 0 || r == 0 {
        return Err(crate::Error::BadParameter("ell and r must be at least 1".into()));
    }
    let block = factorial(ell);
    let denom = (0..r).fold(BigUint::one(), |acc, _| acc * &block);
    Ok(factorial(r * ell) / denom)
}

/// The `m ≤ m_max` for which the `E` witness of order `m` avoids all of
/// `sigma`. Each listed `m` rules out every piecewise monotone map with `m`
/// monotonicity intervals as having `sigma` for its basis.
pub fn basis_obstruction(sigma: &Antichain, m_max: usize) -> Vec<usize> {
    (1..=m_max).filter(|&m| sigma.avoided_by(&witness(m, Variant::E))).collect()
}
