//! Exact allowed, forbidden and basic forbidden patterns of piecewise-linear
//! maps.
//!
//! On every cell of the orbit linearization the iterates are affine, so two
//! of them can only swap order where their lines cross. Splitting the cell at
//! all crossings leaves open sub-cells with a constant pattern, which is read
//! off at the midpoint; crossings and closed cell ends are evaluated on their
//! own and contribute only when the orbit values are pairwise distinct.

use std::collections::{BTreeSet, HashMap, HashSet};

use num::Signed;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::orbit::{fold_leaves, Cell};
use crate::perm::{reduce, PatternSet, Permutation};
use crate::pwl::{Affine, Interval, PwlMap, Rational};

fn pattern_at_point(forms: &[Affine], x: &Rational) -> Option<Permutation> {
    let values: Vec<Rational> = forms.iter().map(|f| f.eval(x)).collect();
    reduce(&values).ok()
}

fn cell_patterns(cell: &Cell, out: &mut BTreeSet<Permutation>) {
    let forms = &cell.forms;
    let d = &cell.domain;
    if d.is_point() {
        out.extend(pattern_at_point(forms, &d.lo));
        return;
    }
    let mut cuts: Vec<Rational> = Vec::new();
    for (i, a) in forms.iter().enumerate() {
        for b in &forms[i + 1..] {
            match a.crossing(b) {
                Some(x) => {
                    if x > d.lo && x < d.hi {
                        cuts.push(x);
                    }
                }
                // two iterates coincide on the whole cell: no pattern anywhere
                None if a.intercept == b.intercept => return,
                None => {}
            }
        }
    }
    cuts.sort();
    cuts.dedup();

    let mut points: Vec<&Rational> = cuts.iter().collect();
    if d.lo_closed {
        points.push(&d.lo);
    }
    if d.hi_closed {
        points.push(&d.hi);
    }
    for x in points {
        out.extend(pattern_at_point(forms, x));
    }

    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(&d.lo);
    edges.extend(cuts.iter());
    edges.push(&d.hi);
    for w in edges.windows(2) {
        let mid = (w[0] + w[1]) / Rational::from_integer(2.into());
        let p = pattern_at_point(forms, &mid).expect("iterates are distinct between crossings");
        out.insert(p);
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::BadParameter("pattern length must be at least 1".into()));
    }
    if n > crate::perm::MAX_LEN {
        return Err(Error::BadParameter(format!("pattern length {n} is too large")));
    }
    Ok(())
}

/// Every pattern of length `n` realized by some point of `[0, 1]`.
pub fn exact_allowed(map: &PwlMap, n: usize, limits: &Limits) -> Result<PatternSet> {
    check_n(n)?;
    let members = fold_leaves(
        map,
        n,
        limits,
        cell_patterns,
        |mut a: BTreeSet<Permutation>, mut b| {
            if a.len() < b.len() {
                std::mem::swap(&mut a, &mut b);
            }
            a.extend(b);
            a
        },
    )?;
    Ok(PatternSet::from_members(n, members))
}

/// Calls `f` on every permutation of length `n` in lexicographic order.
pub(crate) fn for_each_permutation(n: usize, mut f: impl FnMut(&[u8])) {
    let mut w: Vec<u8> = (1..=n as u8).collect();
    loop {
        f(&w);
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| w[i] < w[i + 1]) else {
            return;
        };
        let j = (i + 1..n).rev().find(|&j| w[j] > w[i]).expect("a larger suffix entry exists");
        w.swap(i, j);
        w[i + 1..].reverse();
    }
}

/// `S_n` minus the allowed patterns.
pub fn exact_forbidden(map: &PwlMap, n: usize, limits: &Limits) -> Result<PatternSet> {
    check_n(n)?;
    if n > limits.max_forbidden_n {
        return Err(Error::ResourceLimit {
            what: "forbidden-set length",
            limit: limits.max_forbidden_n as u64,
        });
    }
    let allowed = exact_allowed(map, n, limits)?;
    let mut out = BTreeSet::new();
    for_each_permutation(n, |w| {
        let p = Permutation::from_trusted(w.to_vec());
        if !allowed.contains(&p) {
            out.insert(p);
        }
    });
    Ok(PatternSet::from_members(n, out))
}

/// Orderings of `n` positions compatible with `alpha` on the first `n−1`
/// and `beta` on the last `n−1`, given that the two agree on the overlap.
fn glue(alpha: &[u8], beta: &[u8]) -> impl Iterator<Item = Permutation> {
    let n = alpha.len() + 1;
    // keys: middle entries at multiples of 4, the two ends in the gaps
    let first_gap = i32::from(alpha[0]) - 1;
    let last_gap = i32::from(beta[n - 2]) - 1;
    let middle: Vec<i32> = alpha[1..]
        .iter()
        .map(|&a| 4 * (i32::from(a) - i32::from(a > alpha[0])))
        .collect();
    let offsets: &[(i32, i32)] = if first_gap == last_gap { &[(1, 3), (3, 1)] } else { &[(2, 2)] };
    offsets
        .iter()
        .map(move |&(df, dl)| {
            let mut keys = Vec::with_capacity(n);
            keys.push(4 * first_gap + df);
            keys.extend_from_slice(&middle);
            keys.push(4 * last_gap + dl);
            crate::perm::reduce_distinct(&keys)
        })
        .collect::<Vec<_>>()
        .into_iter()
}

/// Forbidden patterns of length `n` whose two windows of length `n−1` are
/// both allowed.
pub fn exact_basic_forbidden(map: &PwlMap, n: usize, limits: &Limits) -> Result<PatternSet> {
    if n < 2 {
        return Err(Error::BadParameter("basic forbidden patterns need n >= 2".into()));
    }
    check_n(n)?;
    let shorter = exact_allowed(map, n - 1, limits)?;
    let allowed: HashSet<Permutation> = exact_allowed(map, n, limits)?.members().iter().cloned().collect();

    let mut by_head: HashMap<Permutation, Vec<&Permutation>> = HashMap::new();
    if n == 2 {
        by_head.insert(Permutation::identity(1), shorter.iter().collect());
    } else {
        for b in &shorter {
            by_head.entry(b.window(0, n - 2)).or_default().push(b);
        }
    }
    let mut out = BTreeSet::new();
    for a in &shorter {
        let tail = if n == 2 { Permutation::identity(1) } else { a.window(1, n - 2) };
        let Some(partners) = by_head.get(&tail) else { continue };
        for b in partners {
            for pi in glue(a.entries(), b.entries()) {
                if !allowed.contains(&pi) {
                    out.insert(pi);
                }
            }
        }
    }
    Ok(PatternSet::from_members(n, out))
}

fn factorial(n: usize) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))
}

/// Least `n ≤ n_max` with a forbidden pattern of length `n`.
pub fn shortest_forbidden_length(map: &PwlMap, n_max: usize, limits: &Limits) -> Result<Option<usize>> {
    if n_max < 2 {
        return Err(Error::BadParameter("n_max must be at least 2".into()));
    }
    for n in 2..=n_max {
        let count = exact_allowed(map, n, limits)?.len() as u128;
        let total = factorial(n).ok_or_else(|| Error::BadParameter(format!("{n}! overflows")))?;
        if count < total {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Restricts `domain` to the points where `form` is strictly above
/// (`want_above`) or below `other`.
fn restrict(domain: &Interval, form: &Affine, other: &Affine, want_above: bool) -> Option<Interval> {
    // sign of (form - other)(x) = ds·x + di
    let ds = &form.slope - &other.slope;
    let di = &form.intercept - &other.intercept;
    if ds == Rational::from_integer(0.into()) {
        let ok = if want_above { di.is_positive() } else { di.is_negative() };
        return ok.then(|| domain.clone());
    }
    let root = -di / &ds;
    if ds.is_positive() == want_above {
        domain.above(&root)
    } else {
        domain.below(&root)
    }
}

/// Whether some point of `[0, 1]` realizes `pi`.
///
/// Walks the orbit cells keeping only the part of each cell on which the
/// iterates computed so far are already in the relative order prescribed by
/// `pi`; each such part is an interval because it is cut out by affine
/// inequalities.
pub fn is_allowed(map: &PwlMap, pi: &Permutation, limits: &Limits) -> Result<bool> {
    let target = pi.entries();
    let mut visited = 0usize;
    let mut stack = vec![Cell::root()];
    while let Some(cell) = stack.pop() {
        let depth = cell.forms.len();
        if depth == target.len() {
            return Ok(true);
        }
        for child in cell.refine(map) {
            visited += 1;
            if visited > limits.cell_budget {
                return Err(Error::ResourceLimit { what: "orbit cells", limit: limits.cell_budget as u64 });
            }
            let newest = &child.forms[depth];
            let mut domain = Some(child.domain.clone());
            for (j, earlier) in child.forms[..depth].iter().enumerate() {
                let Some(d) = domain else { break };
                domain = restrict(&d, newest, earlier, target[depth] > target[j]);
            }
            if let Some(domain) = domain {
                stack.push(Cell { domain, forms: child.forms });
            }
        }
    }
    Ok(false)
}
