//! Partition of `[0, 1]` into cells on which the first `n` iterates of a
//! piecewise-linear map are single affine forms.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::pwl::{Affine, Interval, PwlMap};

/// A cell together with the affine forms of `f^0, …, f^{k}` on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub domain: Interval,
    pub forms: Vec<Affine>,
}

impl Cell {
    pub(crate) fn root() -> Cell {
        Cell { domain: Interval::unit(), forms: vec![Affine::identity()] }
    }

    /// Pulls the map's pieces back through the last form, extending every
    /// child by one iterate.
    pub(crate) fn refine(&self, map: &PwlMap) -> Vec<Cell> {
        let last = self.forms.last().expect("cells carry at least f^0");
        let extend = |domain: Interval, piece_form: &Affine| {
            let mut forms = Vec::with_capacity(self.forms.len() + 1);
            forms.extend_from_slice(&self.forms);
            forms.push(piece_form.after(last));
            Cell { domain, forms }
        };
        if self.domain.is_point() {
            let y = last.eval(&self.domain.lo);
            let piece = map.piece_at(&y).expect("validated maps send [0,1] into [0,1]");
            return vec![extend(self.domain.clone(), &piece.form)];
        }
        let mut out: Vec<Cell> = map
            .pieces()
            .iter()
            .filter_map(|piece| {
                let pre = last.preimage(&piece.domain);
                self.domain.intersect(&pre).map(|d| extend(d, &piece.form))
            })
            .collect();
        sort_cells(&mut out);
        out
    }
}

fn sort_cells(cells: &mut [Cell]) {
    cells.sort_by(|a, b| {
        a.domain.lo.cmp(&b.domain.lo).then(b.domain.lo_closed.cmp(&a.domain.lo_closed))
    });
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitLinearization {
    horizon: usize,
    cells: Vec<Cell>,
}

impl OrbitLinearization {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Cells sorted by left endpoint.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Interior cell boundaries, in increasing order.
    pub fn breakpoints(&self) -> Vec<crate::pwl::Rational> {
        let mut out: Vec<_> = self.cells.iter().skip(1).map(|c| c.domain.lo.clone()).collect();
        out.dedup();
        out
    }
}

/// Builds the cells for iterates `f^0 … f^{n-1}`.
pub fn orbit_linearization(map: &PwlMap, n: usize, limits: &Limits) -> Result<OrbitLinearization> {
    if n == 0 {
        return Err(Error::BadParameter("horizon must be at least 1".into()));
    }
    let mut cells = vec![Cell::root()];
    for _ in 1..n {
        cells = cells.par_iter().flat_map_iter(|c| c.refine(map)).collect();
        if cells.len() > limits.cell_budget {
            return Err(Error::ResourceLimit { what: "orbit cells", limit: limits.cell_budget as u64 });
        }
    }
    sort_cells(&mut cells);
    Ok(OrbitLinearization { horizon: n, cells })
}

/// Number of cells at horizon `n`, tracking only the newest form of each
/// cell. Fails as soon as a level exceeds `budget`; levels never shrink.
pub(crate) fn count_cells(map: &PwlMap, n: usize, budget: usize) -> Result<usize> {
    let mut level = vec![Cell::root()];
    for _ in 1..n {
        level = level
            .par_iter()
            .flat_map_iter(|c| {
                c.refine(map).into_iter().map(|mut child| {
                    child.forms.drain(..child.forms.len() - 1);
                    child
                })
            })
            .collect();
        if level.len() > budget {
            return Err(Error::ResourceLimit { what: "orbit cells", limit: budget as u64 });
        }
    }
    Ok(level.len())
}

/// Depth-first walk over the cells of horizon `n`, calling `leaf` on each
/// and merging per-subtree results with `combine`. Never holds more than one
/// root-to-leaf path per worker in memory.
pub(crate) fn fold_leaves<T, F, C>(
    map: &PwlMap,
    n: usize,
    limits: &Limits,
    leaf: F,
    combine: C,
) -> Result<T>
where
    T: Send + Default,
    F: Fn(&Cell, &mut T) + Sync,
    C: Fn(T, T) -> T + Sync + Send,
{
    if n == 0 {
        return Err(Error::BadParameter("horizon must be at least 1".into()));
    }
    let budget = limits.cell_budget;
    count_cells(map, n, budget)?;
    let seen = AtomicUsize::new(0);

    fn walk<T, F: Fn(&Cell, &mut T)>(
        map: &PwlMap,
        cell: &Cell,
        n: usize,
        seen: &AtomicUsize,
        budget: usize,
        leaf: &F,
        acc: &mut T,
    ) -> Result<()> {
        if cell.forms.len() == n {
            if seen.fetch_add(1, Ordering::Relaxed) >= budget {
                return Err(Error::ResourceLimit { what: "orbit cells", limit: budget as u64 });
            }
            leaf(cell, acc);
            return Ok(());
        }
        for child in cell.refine(map) {
            walk(map, &child, n, seen, budget, leaf, acc)?;
        }
        Ok(())
    }

    // expand breadth-first until there is enough work to spread over workers
    let mut frontier = vec![Cell::root()];
    while frontier.len() < 64 && frontier[0].forms.len() < n {
        frontier = frontier.iter().flat_map(|c| c.refine(map)).collect();
    }
    frontier
        .par_iter()
        .map(|c| {
            let mut acc = T::default();
            walk(map, c, n, &seen, budget, &leaf, &mut acc)?;
            Ok(acc)
        })
        .try_reduce(T::default, |a, b| Ok(combine(a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pwl::{int, rat};

    #[test]
    fn tent_horizon_two_is_the_map() {
        let lin = orbit_linearization(&PwlMap::tent(), 2, &Limits::default()).unwrap();
        let cells = lin.cells();
        assert_eq!(cells.len(), 2);
        assert_eq!(cells[0].domain, Interval::new(int(0), rat(1, 2), true, false));
        assert_eq!(cells[0].forms, vec![Affine::identity(), Affine::new(int(2), int(0))]);
        assert_eq!(cells[1].domain, Interval::closed(rat(1, 2), int(1)));
        assert_eq!(cells[1].forms, vec![Affine::identity(), Affine::new(int(-2), int(2))]);
    }

    #[test]
    fn tent_horizon_three() {
        let lin = orbit_linearization(&PwlMap::tent(), 3, &Limits::default()).unwrap();
        assert_eq!(lin.cells().len(), 4);
        assert_eq!(lin.breakpoints(), vec![rat(1, 4), rat(1, 2), rat(3, 4)]);
    }

    #[test]
    fn sawtooth_cells() {
        let saw2 = PwlMap::sawtooth(2).unwrap();
        let lin = orbit_linearization(&saw2, 2, &Limits::default()).unwrap();
        // two ramps plus the isolated point {1}
        let ramps: Vec<_> = lin.cells().iter().filter(|c| !c.domain.is_point()).collect();
        assert_eq!(ramps.len(), 2);
        assert_eq!(lin.cells().len(), 3);
        assert!(lin.cells().len() <= saw2.pieces().len());
    }

    #[test]
    fn cell_budget() {
        let l = Limits { cell_budget: 10, ..Limits::default() };
        assert!(matches!(
            orbit_linearization(&PwlMap::tent(), 6, &l),
            Err(Error::ResourceLimit { .. })
        ));
        assert!(orbit_linearization(&PwlMap::tent(), 0, &l).is_err());
    }
}
