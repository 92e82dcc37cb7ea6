// Brute-force oracles shared by the integration tests. None of them go
// through the orbit engine, the avoider search or the library's reduction.
#![allow(dead_code)]

use std::collections::BTreeSet;

use patlab::pwl::rat;
use patlab::{Permutation, PwlMap};

/// Relative order of distinct values: entry `i` becomes one plus the number
/// of values smaller than it.
pub fn rank<T: PartialOrd>(values: &[T]) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(values.len());
    for (i, a) in values.iter().enumerate() {
        let mut r = 1;
        for (j, b) in values.iter().enumerate() {
            if i != j {
                if a == b {
                    return None;
                }
                if b < a {
                    r += 1;
                }
            }
        }
        out.push(r);
    }
    Some(out)
}

pub fn perm(word: &[usize]) -> Permutation {
    Permutation::from_slice(word).unwrap()
}

pub fn p(s: &str) -> Permutation {
    s.parse().unwrap()
}

pub fn words(set: impl IntoIterator<Item = impl std::borrow::Borrow<Permutation>>) -> Vec<String> {
    set.into_iter().map(|p| p.borrow().to_string()).collect()
}

/// All of `S_n` as words, in lexicographic order.
pub fn all_words(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 1..=n {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(n, prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut vec![false; n + 1], &mut out);
    out
}

pub fn all_perms(n: usize) -> Vec<Permutation> {
    all_words(n).iter().map(|w| perm(w)).collect()
}

/// Window-by-window containment check.
pub fn contains_word(pi: &[usize], sigma: &[usize]) -> bool {
    sigma.len() <= pi.len() && pi.windows(sigma.len()).any(|w| rank(w).as_deref() == Some(sigma))
}

/// Patterns realized by orbits of `j/q`, `0 ≤ j ≤ q`, evaluated one step at
/// a time with the map's own piece lookup. Every result is allowed; for
/// large `q` the set is usually all of the allowed patterns.
pub fn sampled_orbit_patterns(map: &PwlMap, n: usize, q: i64) -> BTreeSet<Permutation> {
    let mut out = BTreeSet::new();
    for j in 0..=q {
        let mut x = rat(j, q);
        let mut orbit = Vec::with_capacity(n);
        for _ in 0..n {
            orbit.push(x.clone());
            x = map.eval(&x).unwrap();
        }
        if let Some(w) = rank(&orbit) {
            out.insert(perm(&w));
        }
    }
    out
}

/// Tent map orbits of `j/q` in integer arithmetic (`q` odd keeps orbits off
/// the breakpoint except at `j = q/2`-type points, which ties filter out).
pub fn tent_integer_patterns(n: usize, q: u64) -> BTreeSet<Permutation> {
    let mut out = BTreeSet::new();
    let mut orbit = vec![0u64; n];
    for j in 0..=q {
        let mut y = j;
        for slot in orbit.iter_mut() {
            *slot = y;
            y = if 2 * y < q { 2 * y } else { 2 * q - 2 * y };
        }
        if let Some(w) = rank(&orbit) {
            out.insert(perm(&w));
        }
    }
    out
}

/// Basic forbidden patterns derived from allowed sets of lengths `n−1` and `n`.
pub fn basic_from_allowed(shorter: &BTreeSet<Permutation>, allowed: &BTreeSet<Permutation>, n: usize) -> BTreeSet<Permutation> {
    all_words(n)
        .into_iter()
        .filter(|w| {
            let pi = perm(w);
            !allowed.contains(&pi)
                && shorter.contains(&perm(&rank(&w[..n - 1]).unwrap()))
                && shorter.contains(&perm(&rank(&w[1..]).unwrap()))
        })
        .map(|w| perm(&w))
        .collect()
}

/// Direct reading of the certificate-family conditions, 1-based.
pub fn in_family(w: &[usize], k: usize, strict: bool) -> bool {
    let n = w.len();
    let at = |q: usize| w[q - 1];
    (1..=n).filter(|&i| i + k < n).any(|i| {
        let bridged = (i..=i + k - 1).all(|j| {
            (1..n).any(|l| at(j) > at(l) && at(l) > at(j + 1) && at(l) < at(l + 1))
        });
        let drop = at(i + k) > at(i + k + 1);
        let later = !strict || (i + k + 2..=n).any(|h| at(i + k + 1) < at(h));
        bridged && drop && later
    })
}
