//! Reference checks run by `patlab verify-paper`.
//!
//! Each check recomputes a published value or structural fact with the exact
//! engines and reports pass or fail with a short detail line.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::avoid::count_avoiders;
use crate::bounds::{basis_obstruction, in_e, prop6_check, shortest_bound, witness, Method, Variant};
use crate::engine::{
    exact_allowed, exact_basic_forbidden, exact_forbidden, for_each_permutation, is_allowed,
    shortest_forbidden_length,
};
use crate::error::Result;
use crate::limits::Limits;
use crate::numeric::{sampled_allowed, NumericMap, SampleConfig};
use crate::perm::{Antichain, PatternSet, Permutation};
use crate::pwl::{int, rat, Interval, Orientation, PwlMap, PwlPiece};

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Sizes of the tent map's basic forbidden sets for `n = 3..=8`.
pub const TENT_BASIC_COUNTS: [usize; 6] = [1, 5, 9, 28, 53, 110];

fn perm(word: &[usize]) -> Permutation {
    Permutation::from_slice(word).expect("family words are permutations")
}

/// `(n−2) 1 2 … (n−3) (n−1) n`, `(n−2) 1 … (n−3) n (n−1)` and, for
/// `2 ≤ k ≤ n−2`, `(n−1) 1 … (k−1)(k+1) … (n−2) n k`: basic forbidden
/// patterns of the tent map for every `n ≥ 4`.
pub fn tent_basic_family(n: usize) -> Vec<Permutation> {
    assert!(n >= 4);
    let mut out = Vec::new();
    let head: Vec<usize> = std::iter::once(n - 2).chain(1..=n - 3).collect();
    out.push(perm(&[head.clone(), vec![n - 1, n]].concat()));
    out.push(perm(&[head, vec![n, n - 1]].concat()));
    for k in 2..=n - 2 {
        let word: Vec<usize> = std::iter::once(n - 1)
            .chain((1..=n - 2).filter(|&v| v != k))
            .chain([n, k])
            .collect();
        out.push(perm(&word));
    }
    out
}

/// `(n−3)(n−2)(n−1) 1 2 … (n−4) n`, basic forbidden for the tent map when `n ≥ 5`.
pub fn tent_staircase(n: usize) -> Permutation {
    assert!(n >= 5);
    let word: Vec<usize> = [n - 3, n - 2, n - 1].into_iter().chain(1..=n - 4).chain([n]).collect();
    perm(&word)
}

/// Increasing map with a single interior fixed point at 1/2.
pub fn crossing_once_map() -> PwlMap {
    PwlMap::new(vec![PwlPiece::new(Interval::unit(), rat(1, 2), rat(1, 4))]).expect("valid map")
}

/// Increasing map with `f(x) ≥ x`, touching the diagonal at 1/2 and 1.
pub fn above_diagonal_map() -> PwlMap {
    PwlMap::new(vec![
        PwlPiece::new(Interval::new(int(0), rat(1, 2), true, false), rat(1, 2), rat(1, 4)),
        PwlPiece::new(Interval::new(rat(1, 2), rat(3, 4), true, false), rat(3, 2), rat(-1, 4)),
        PwlPiece::new(Interval::closed(rat(3, 4), int(1)), rat(1, 2), rat(1, 2)),
    ])
    .expect("valid map")
}

/// Patterns of the tent map at every dyadic point `j / 2^bits`, computed
/// with integer arithmetic.
pub fn dyadic_tent_patterns(n: usize, bits: u32) -> BTreeSet<Permutation> {
    let denom: u64 = 1 << bits;
    let mut out = BTreeSet::new();
    let mut orbit = vec![0u64; n];
    for j in 0..=denom {
        let mut y = j;
        for slot in orbit.iter_mut() {
            *slot = y;
            y = if 2 * y < denom { 2 * y } else { 2 * denom - 2 * y };
        }
        if let Ok(p) = crate::perm::reduce(&orbit) {
            out.insert(p);
        }
    }
    out
}

fn all_windows_allowed(set: &PatternSet, shorter: &[PatternSet]) -> bool {
    set.iter().all(|pi| {
        (1..pi.len()).all(|len| (0..=pi.len() - len).all(|s| shorter[len - 1].contains(&pi.window(s, len))))
    })
}

fn family(k: usize, variant: Variant, n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    for_each_permutation(n, |w| {
        let p = Permutation::from_trusted(w.to_vec());
        if in_e(&p, k, variant) {
            out.push(p);
        }
    });
    out
}

fn outcome(id: usize, name: &'static str, result: Result<(bool, String)>) -> CheckOutcome {
    match result {
        Ok((passed, detail)) => CheckOutcome { id, name, passed, detail },
        Err(e) => CheckOutcome { id, name, passed: false, detail: format!("error: {e}") },
    }
}

pub fn run_all(limits: &Limits) -> Vec<CheckOutcome> {
    let tent = PwlMap::tent();
    let saw = |n| PwlMap::sawtooth(n).expect("catalog");
    let alt = |n| PwlMap::alt_sawtooth(n).expect("catalog");
    let mut out = Vec::new();

    out.push(outcome(1, "tent basic forbidden counts n=3..8", (|| {
        let got = (3..=8)
            .map(|n| exact_basic_forbidden(&tent, n, limits).map(|s| s.len()))
            .collect::<Result<Vec<_>>>()?;
        Ok((got == TENT_BASIC_COUNTS, format!("{got:?}")))
    })()));

    out.push(outcome(2, "tent B_3 and B_4 sets", (|| {
        let b3: Vec<String> = exact_basic_forbidden(&tent, 3, limits)?.iter().map(|p| p.to_string()).collect();
        let b4: Vec<String> = exact_basic_forbidden(&tent, 4, limits)?.iter().map(|p| p.to_string()).collect();
        let ok = b3 == ["321"] && b4 == ["1423", "2134", "2143", "3142", "4231"];
        Ok((ok, format!("B3={b3:?} B4={b4:?}")))
    })()));

    out.push(outcome(3, "explicit family lies in tent B_n for n=4..8", (|| {
        let mut missing = Vec::new();
        for n in 4..=8 {
            let b = exact_basic_forbidden(&tent, n, limits)?;
            missing.extend(tent_basic_family(n).into_iter().filter(|p| !b.contains(p)).map(|p| p.to_string()));
        }
        Ok((missing.is_empty(), format!("missing {missing:?}")))
    })()));

    out.push(outcome(4, "staircase pattern lies in tent B_n for n=5..8", (|| {
        let mut missing = Vec::new();
        for n in 5..=8 {
            let p = tent_staircase(n);
            if !exact_basic_forbidden(&tent, n, limits)?.contains(&p) {
                missing.push(p.to_string());
            }
        }
        Ok((missing.is_empty(), format!("missing {missing:?}")))
    })()));

    out.push(outcome(5, "shortest forbidden length of Saw_N is N+2 (N=2,3,4)", (|| {
        let got = (2..=4u32)
            .map(|n| shortest_forbidden_length(&saw(n), n as usize + 3, limits))
            .collect::<Result<Vec<_>>>()?;
        Ok((got == [Some(4), Some(5), Some(6)], format!("{got:?}")))
    })()));

    out.push(outcome(6, "simple bound is valid; tight for AS_3, AS_5", (|| {
        let mut ok = true;
        let mut detail = Vec::new();
        let maps: Vec<(String, PwlMap)> = std::iter::once(("tent".to_string(), tent.clone()))
            .chain((2..=4).map(|n| (format!("saw{n}"), saw(n))))
            .chain([3, 5, 7, 9].map(|n| (format!("as{n}"), alt(n))))
            .collect();
        for (name, map) in &maps {
            let r = shortest_bound(map, Method::Simple, Orientation::Below);
            let certified = !is_allowed(map, &witness(r.k, Variant::EPrime), limits)?;
            ok &= certified;
            detail.push(format!("{name}:k={},bound={},witness_forbidden={certified}", r.k, r.bound));
        }
        for n in [3u32, 5] {
            let actual = shortest_forbidden_length(&alt(n), n as usize + 1, limits)?;
            ok &= actual == Some(n as usize + 1);
            detail.push(format!("as{n}:actual={actual:?}"));
        }
        Ok((ok, detail.join(" ")))
    })()));

    out.push(outcome(7, "E'_4 inside F(Saw_2), E_5 inside F(tent)", (|| {
        let f_saw = exact_forbidden(&saw(2), 4, limits)?;
        let e4 = family(1, Variant::EPrime, 4);
        let f_tent = exact_forbidden(&tent, 5, limits)?;
        let e5 = family(1, Variant::E, 5);
        let ok = e4.iter().all(|p| f_saw.contains(p)) && e5.iter().all(|p| f_tent.contains(p));
        Ok((ok, format!("|E'_4|={} |E_5|={}", e4.len(), e5.len())))
    })()));

    out.push(outcome(8, "peak-free permutations number 2^(n-1), n=1..14", (|| {
        let sigma = Antichain::parse_list("132,231")?;
        let mut bad = Vec::new();
        for n in 1..=14 {
            let c = count_avoiders(&sigma, n, limits)?;
            if c != 1 << (n - 1) {
                bad.push((n, c));
            }
        }
        Ok((bad.is_empty(), format!("mismatches {bad:?}")))
    })()));

    out.push(outcome(9, "counting condition fails for single lengths 6..12", (|| {
        let violated = (6..=12).map(|k| prop6_check(&[k]).map(|c| !c.satisfied)).collect::<Result<Vec<_>>>()?;
        let pair = prop6_check(&[3, 3])?.satisfied;
        Ok((violated.iter().all(|&v| v) && pair, format!("violated={violated:?} [3,3] satisfied={pair}")))
    })()));

    out.push(outcome(10, "{132,231} obstructed for m=1..5", (|| {
        let got = basis_obstruction(&Antichain::parse_list("132,231")?, 5);
        Ok((got == [1, 2, 3, 4, 5], format!("{got:?}")))
    })()));

    out.push(outcome(11, "closure, partition and dyadic oracle", (|| {
        let mut ok = true;
        for map in [tent.clone(), saw(2), saw(3)] {
            let sets = (1..=7).map(|n| exact_allowed(&map, n, limits)).collect::<Result<Vec<_>>>()?;
            for (i, set) in sets.iter().enumerate() {
                ok &= all_windows_allowed(set, &sets[..i]);
            }
            for n in 1..=7 {
                let forb = exact_forbidden(&map, n, limits)?;
                let total: usize = (1..=n).product();
                ok &= forb.len() + sets[n - 1].len() == total
                    && forb.iter().all(|p| !sets[n - 1].contains(p));
            }
        }
        for n in 1..=6 {
            ok &= exact_allowed(&tent, n, limits)?.members() == &dyadic_tent_patterns(n, 16);
        }
        Ok((ok, String::new()))
    })()));

    out.push(outcome(12, "sampled logistic/1-x^2 patterns", (|| {
        let cfg = SampleConfig::default();
        let l4 = NumericMap::logistic(4.0)?;
        let mut ok = true;
        for n in 1..=7 {
            let s = sampled_allowed(&l4, n, &cfg)?;
            let e = exact_allowed(&tent, n, limits)?;
            ok &= s.is_subset(&e) && (n > 5 || s == e);
        }
        let g = NumericMap::one_minus_x_squared();
        let g3: Vec<String> = sampled_allowed(&g, 3, &cfg)?.iter().map(|p| p.to_string()).collect();
        ok &= g3 == ["213", "231"];
        let basis = Antichain::parse_list("123,132,312,321")?;
        for n in 3..=6 {
            ok &= sampled_allowed(&g, n, &cfg)?.iter().all(|p| basis.avoided_by(p));
        }
        Ok((ok, format!("g3={g3:?}")))
    })()));

    out.push(outcome(13, "monotone increasing maps", (|| {
        let once = crossing_once_map();
        let b3: Vec<String> = exact_basic_forbidden(&once, 3, limits)?.iter().map(|p| p.to_string()).collect();
        let mut ok = b3 == ["132", "213", "231", "312"];
        for n in 2..=6 {
            let al = exact_allowed(&once, n, limits)?;
            let want: BTreeSet<Permutation> = [Permutation::identity(n), perm(&(1..=n).rev().collect::<Vec<_>>())].into();
            ok &= al.members() == &want;
        }
        let above = above_diagonal_map();
        let b2: Vec<String> = exact_basic_forbidden(&above, 2, limits)?.iter().map(|p| p.to_string()).collect();
        ok &= b2 == ["21"];
        for n in 3..=6 {
            ok &= exact_basic_forbidden(&above, n, limits)?.is_empty();
        }
        Ok((ok, format!("crossing once B3={b3:?}; above diagonal B2={b2:?}")))
    })()));

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_shapes() {
        let words: Vec<String> = tent_basic_family(4).iter().map(|p| p.to_string()).collect();
        assert_eq!(words, ["2134", "2143", "3142"]);
        let words: Vec<String> = tent_basic_family(5).iter().map(|p| p.to_string()).collect();
        assert_eq!(words, ["31245", "31254", "41352", "41253"]);
        assert_eq!(tent_staircase(5).to_string(), "23415");
        assert_eq!(tent_staircase(6).to_string(), "345126");
    }

    #[test]
    fn dyadic_oracle_small() {
        let got: Vec<String> = dyadic_tent_patterns(3, 8).iter().map(|p| p.to_string()).collect();
        assert_eq!(got, ["123", "132", "213", "231", "312"]);
    }
}
