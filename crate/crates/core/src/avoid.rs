//! Enumeration of permutations avoiding a set of consecutive patterns.
//!
//! Permutations of length `n` are grown one entry at a time: a reduced
//! prefix of length `k` is extended by choosing the relative rank of the new
//! last entry among `k + 1` slots and shifting the larger entries up. The
//! relative order inside every earlier window is unchanged by the shift, so
//! only windows ending at the new entry need to be checked, and a prefix that
//! already contains a forbidden window is pruned together with its subtree.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::perm::{order_isomorphic, Antichain, PatternSet, Permutation};

/// Depth at which the search tree is split across workers.
const SPLIT_DEPTH: usize = 5;

struct Search<'a> {
    sigma: &'a Antichain,
    n: usize,
    budget: u64,
    visited: AtomicU64,
}

impl Search<'_> {
    fn tick(&self) -> Result<()> {
        if self.visited.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(Error::ResourceLimit { what: "avoider search nodes", limit: self.budget });
        }
        Ok(())
    }

    /// Whether the newest entry closes a window matching some pattern.
    fn closes_pattern(&self, prefix: &[u8]) -> bool {
        let k = prefix.len();
        self.sigma.patterns().iter().any(|s| {
            let m = s.len();
            m <= k && order_isomorphic(&prefix[k - m..], s.entries())
        })
    }

    fn children(&self, prefix: &[u8], mut visit: impl FnMut(&[u8]) -> Result<()>) -> Result<()> {
        let k = prefix.len() as u8;
        let mut child = Vec::with_capacity(prefix.len() + 1);
        for v in 1..=k + 1 {
            child.clear();
            child.extend(prefix.iter().map(|&e| if e >= v { e + 1 } else { e }));
            child.push(v);
            self.tick()?;
            if !self.closes_pattern(&child) {
                visit(&child)?;
            }
        }
        Ok(())
    }

    fn frontier(&self, depth: usize) -> Result<Vec<Vec<u8>>> {
        let mut level = vec![Vec::new()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for prefix in &level {
                self.children(prefix, |c| {
                    next.push(c.to_vec());
                    Ok(())
                })?;
            }
            level = next;
        }
        Ok(level)
    }

    fn count_from(&self, prefix: &[u8]) -> Result<u64> {
        if prefix.len() == self.n {
            return Ok(1);
        }
        let mut total = 0;
        self.children(prefix, |c| {
            total += self.count_from(c)?;
            Ok(())
        })?;
        Ok(total)
    }

    fn collect_from(&self, prefix: &[u8], out: &mut Vec<Permutation>) -> Result<()> {
        if prefix.len() == self.n {
            out.push(Permutation::from_trusted(prefix.to_vec()));
            return Ok(());
        }
        self.children(prefix, |c| self.collect_from(c, out))
    }
}

fn search<'a>(sigma: &'a Antichain, n: usize, limits: &Limits) -> Result<Search<'a>> {
    if n == 0 {
        return Err(Error::BadParameter("n must be at least 1".into()));
    }
    if n > crate::perm::MAX_LEN {
        return Err(Error::BadParameter(format!("n = {n} is too large")));
    }
    Ok(Search { sigma, n, budget: limits.node_budget, visited: AtomicU64::new(0) })
}

/// All permutations of length `n` avoiding every pattern of `sigma`.
pub fn avoiders(sigma: &Antichain, n: usize, limits: &Limits) -> Result<PatternSet> {
    let s = search(sigma, n, limits)?;
    let roots = s.frontier(SPLIT_DEPTH.min(n))?;
    let parts: Vec<Vec<Permutation>> = roots
        .par_iter()
        .map(|r| {
            let mut out = Vec::new();
            s.collect_from(r, &mut out)?;
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(PatternSet::from_members(n, parts.into_iter().flatten().collect()))
}

/// `|avoiders(sigma, n)|` without materializing the set.
pub fn count_avoiders(sigma: &Antichain, n: usize, limits: &Limits) -> Result<u64> {
    let s = search(sigma, n, limits)?;
    let roots = s.frontier(SPLIT_DEPTH.min(n))?;
    roots.par_iter().map(|r| s.count_from(r)).try_reduce(|| 0, |a, b| Ok(a + b))
}
