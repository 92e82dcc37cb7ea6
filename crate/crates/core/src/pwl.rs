//! Exact piecewise-linear self-maps of `[0, 1]`.

use std::fmt;

use num::{BigInt, BigRational, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// An interval of the real line with explicit endpoint closure.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Self {
        Interval { lo, hi, lo_closed, hi_closed }
    }

    pub fn closed(lo: Rational, hi: Rational) -> Self {
        Interval::new(lo, hi, true, true)
    }

    pub fn point(p: Rational) -> Self {
        Interval::new(p.clone(), p, true, true)
    }

    pub fn unit() -> Self {
        Interval::closed(int(0), int(1))
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => !(self.lo_closed && self.hi_closed),
            std::cmp::Ordering::Greater => true,
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi && self.lo_closed && self.hi_closed
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_closed { *x >= self.lo } else { *x > self.lo };
        let below = if self.hi_closed { *x <= self.hi } else { *x < self.hi };
        above && below
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    /// Intersection, or `None` when empty.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Less => (other.lo.clone(), other.lo_closed),
            std::cmp::Ordering::Greater => (self.lo.clone(), self.lo_closed),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => (self.hi.clone(), self.hi_closed),
            std::cmp::Ordering::Greater => (other.hi.clone(), other.hi_closed),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        let out = Interval { lo, hi, lo_closed, hi_closed };
        (!out.is_empty()).then_some(out)
    }

    /// `{x in self : x < r}`.
    pub fn below(&self, r: &Rational) -> Option<Interval> {
        let mut out = self.clone();
        if *r <= out.hi {
            out.hi = r.clone();
            out.hi_closed = false;
        }
        (!out.is_empty()).then_some(out)
    }

    /// `{x in self : x > r}`.
    pub fn above(&self, r: &Rational) -> Option<Interval> {
        let mut out = self.clone();
        if *r >= out.lo {
            out.lo = r.clone();
            out.lo_closed = false;
        }
        (!out.is_empty()).then_some(out)
    }

    /// Whether `self` and the following disjoint interval `next` form one
    /// connected set.
    pub fn joins(&self, next: &Interval) -> bool {
        self.hi > next.lo || (self.hi == next.lo && (self.hi_closed || next.lo_closed))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `x ↦ slope·x + intercept`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Affine {
    pub slope: Rational,
    pub intercept: Rational,
}

impl Affine {
    pub fn new(slope: Rational, intercept: Rational) -> Self {
        Affine { slope, intercept }
    }

    pub fn identity() -> Self {
        Affine::new(int(1), int(0))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.intercept
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &Affine) -> Affine {
        Affine {
            slope: &self.slope * &inner.slope,
            intercept: &self.slope * &inner.intercept + &self.intercept,
        }
    }

    /// Abscissa where `self` and `other` agree, if the lines cross exactly once.
    pub fn crossing(&self, other: &Affine) -> Option<Rational> {
        let ds = &self.slope - &other.slope;
        if ds.is_zero() {
            None
        } else {
            Some((&other.intercept - &self.intercept) / ds)
        }
    }

    /// Preimage of `target` under this (non-constant) affine map.
    pub fn preimage(&self, target: &Interval) -> Interval {
        let lo = (&target.lo - &self.intercept) / &self.slope;
        let hi = (&target.hi - &self.intercept) / &self.slope;
        if self.slope.is_positive() {
            Interval::new(lo, hi, target.lo_closed, target.hi_closed)
        } else {
            Interval::new(hi, lo, target.hi_closed, target.lo_closed)
        }
    }

    /// Points of `domain` lying strictly below (or above) the diagonal.
    fn versus_diagonal(&self, domain: &Interval, orientation: Orientation) -> Option<Interval> {
        // sign of (slope - 1)·x + intercept decides
        let lead = &self.slope - int(1);
        if lead.is_zero() {
            let holds = match orientation {
                Orientation::Below => self.intercept.is_negative(),
                Orientation::Above => self.intercept.is_positive(),
            };
            return holds.then(|| domain.clone());
        }
        let root = -&self.intercept / &lead;
        match (orientation, lead.is_positive()) {
            (Orientation::Below, true) | (Orientation::Above, false) => domain.below(&root),
            (Orientation::Below, false) | (Orientation::Above, true) => domain.above(&root),
        }
    }
}

/// Which side of the diagonal a descent-style count refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `f(x) < x`
    Below,
    /// `f(x) > x`
    Above,
}

impl std::str::FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "below" => Ok(Orientation::Below),
            "above" => Ok(Orientation::Above),
            other => Err(Error::BadParameter(format!("orientation `{other}`"))),
        }
    }
}

/// One affine branch of a piecewise-linear map.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PwlPiece {
    pub domain: Interval,
    pub form: Affine,
}

impl PwlPiece {
    pub fn new(domain: Interval, slope: Rational, intercept: Rational) -> Self {
        PwlPiece { domain, form: Affine::new(slope, intercept) }
    }

    pub fn is_degenerate(&self) -> bool {
        self.domain.is_point()
    }

    pub fn is_increasing(&self) -> bool {
        self.form.slope.is_positive()
    }
}

/// A piecewise-linear map of `[0, 1]` into itself whose pieces partition
/// `[0, 1]` exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PwlMap {
    pieces: Vec<PwlPiece>,
}

impl PwlMap {
    /// Validates and orders the pieces. Pieces may be given in any order.
    pub fn new(mut pieces: Vec<PwlPiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Validation("a map needs at least one piece".into()));
        }
        // a single-point piece sorts before the half-open piece starting there
        pieces.sort_by(|a, b| {
            a.domain.lo.cmp(&b.domain.lo).then(b.domain.lo_closed.cmp(&a.domain.lo_closed))
        });
        let zero = int(0);
        let one = int(1);
        for (i, p) in pieces.iter().enumerate() {
            let d = &p.domain;
            if d.is_empty() {
                return Err(Error::Validation(format!("piece {i} has empty domain {d}")));
            }
            if !d.is_point() && p.form.slope.is_zero() {
                return Err(Error::Validation(format!("piece {i} on {d} has zero slope")));
            }
            for end in [&d.lo, &d.hi] {
                let y = p.form.eval(end);
                if y < zero || y > one {
                    return Err(Error::Validation(format!(
                        "image escape: piece {i} sends {end} to {y}, outside [0,1]"
                    )));
                }
            }
        }
        let first = &pieces[0].domain;
        if first.lo != zero || !first.lo_closed {
            return Err(Error::Validation(format!("gap: pieces do not cover 0 (first piece {first})")));
        }
        for (i, w) in pieces.windows(2).enumerate() {
            let (a, b) = (&w[0].domain, &w[1].domain);
            if a.hi < b.lo || (a.hi == b.lo && !a.hi_closed && !b.lo_closed) {
                return Err(Error::Validation(format!("gap between piece {i} {a} and piece {} {b}", i + 1)));
            }
            if a.hi > b.lo || (a.hi_closed && b.lo_closed) {
                return Err(Error::Validation(format!(
                    "overlap between piece {i} {a} and piece {} {b}",
                    i + 1
                )));
            }
        }
        let last = &pieces[pieces.len() - 1].domain;
        if last.hi != one || !last.hi_closed {
            return Err(Error::Validation(format!("gap: pieces do not cover 1 (last piece {last})")));
        }
        Ok(PwlMap { pieces })
    }

    /// `x ↦ 2x` on `[0, 1/2)`, `x ↦ 2 − 2x` on `[1/2, 1]`.
    pub fn tent() -> Self {
        PwlMap::new(vec![
            PwlPiece::new(Interval::new(int(0), rat(1, 2), true, false), int(2), int(0)),
            PwlPiece::new(Interval::closed(rat(1, 2), int(1)), int(-2), int(2)),
        ])
        .expect("tent map is valid")
    }

    /// `x ↦ Nx mod 1`: ramps on `[j/N, (j+1)/N)` plus the point `{1}` sent to 0.
    pub fn sawtooth(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadParameter(format!("sawtooth needs N >= 2, got {n}")));
        }
        let big_n = i64::from(n);
        let mut pieces: Vec<PwlPiece> = (0..big_n)
            .map(|j| {
                PwlPiece::new(
                    Interval::new(rat(j, big_n), rat(j + 1, big_n), true, false),
                    int(big_n),
                    int(-j),
                )
            })
            .collect();
        pieces.push(PwlPiece::new(Interval::point(int(1)), int(big_n), int(-big_n)));
        PwlMap::new(pieces)
    }

    /// `x ↦ Λ(Nx/2 mod 1)`: N ramps of alternating sign, starting increasing.
    pub fn alt_sawtooth(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadParameter(format!("alt_sawtooth needs N >= 2, got {n}")));
        }
        let big_n = i64::from(n);
        let pieces = (0..big_n)
            .map(|j| {
                let last = j == big_n - 1;
                let domain = Interval::new(rat(j, big_n), rat(j + 1, big_n), true, last);
                if j % 2 == 0 {
                    PwlPiece::new(domain, int(big_n), int(-j))
                } else {
                    PwlPiece::new(domain, int(-big_n), int(j + 1))
                }
            })
            .collect();
        PwlMap::new(pieces)
    }

    /// Catalog lookup by name: `tent`, `sawtooth`, `alt_sawtooth`.
    pub fn catalog(name: &str, param: Option<u32>) -> Result<Self> {
        match (name, param) {
            ("tent", None) => Ok(PwlMap::tent()),
            ("tent", Some(_)) => Err(Error::BadParameter("tent takes no parameter".into())),
            ("sawtooth", Some(n)) => PwlMap::sawtooth(n),
            ("alt_sawtooth", Some(n)) => PwlMap::alt_sawtooth(n),
            ("sawtooth" | "alt_sawtooth", None) => {
                Err(Error::BadParameter(format!("{name} needs an integer N")))
            }
            (other, _) => Err(Error::UnknownMap(other.to_string())),
        }
    }

    pub fn pieces(&self) -> &[PwlPiece] {
        &self.pieces
    }

    /// Non-degenerate pieces, i.e. the monotonicity intervals.
    pub fn monotone_pieces(&self) -> impl Iterator<Item = &PwlPiece> {
        self.pieces.iter().filter(|p| !p.is_degenerate())
    }

    pub fn piece_at(&self, x: &Rational) -> Option<&PwlPiece> {
        // pieces are sorted; the last one whose lower end admits x is the candidate
        let idx = self.pieces.partition_point(|p| {
            p.domain.lo < *x || (p.domain.lo == *x && p.domain.lo_closed)
        });
        let candidate = self.pieces.get(idx.checked_sub(1)?)?;
        candidate.domain.contains(x).then_some(candidate)
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        self.piece_at(x)
            .map(|p| p.form.eval(x))
            .ok_or_else(|| Error::OutOfDomain(x.to_string()))
    }

    /// Maximal intervals on which `f(x) < x` (or `f(x) > x`), in order.
    pub fn diagonal_components(&self, orientation: Orientation) -> Vec<Interval> {
        let mut parts: Vec<Interval> = self
            .pieces
            .iter()
            .filter_map(|p| p.form.versus_diagonal(&p.domain, orientation))
            .collect();
        parts.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut merged: Vec<Interval> = Vec::new();
        for part in parts {
            match merged.last_mut() {
                Some(cur) if cur.joins(&part) => {
                    if part.hi > cur.hi || (part.hi == cur.hi && part.hi_closed) {
                        cur.hi = part.hi;
                        cur.hi_closed = part.hi_closed;
                    }
                }
                _ => merged.push(part),
            }
        }
        merged
    }

    /// Number of connected components of `{x : f(x) < x}`.
    pub fn descent_components(&self) -> usize {
        self.diagonal_components(Orientation::Below).len()
    }

    /// Number of connected components of `{x : f(x) > x}`.
    pub fn ascent_components(&self) -> usize {
        self.diagonal_components(Orientation::Above).len()
    }

    /// Count of monotonicity intervals that can host an escaping descent run.
    ///
    /// Below: increasing pieces whose left endpoint `a` has `f(a) < a`
    /// (evaluated on the affine extension), plus decreasing pieces containing
    /// a point with `f(x) < x`. Above mirrors this with the right endpoint
    /// and `f(x) > x`. Single-point pieces are not monotonicity intervals.
    pub fn refined_k(&self, orientation: Orientation) -> usize {
        self.monotone_pieces()
            .filter(|p| {
                if p.is_increasing() {
                    match orientation {
                        Orientation::Below => p.form.eval(&p.domain.lo) < p.domain.lo,
                        Orientation::Above => p.form.eval(&p.domain.hi) > p.domain.hi,
                    }
                } else {
                    p.form.versus_diagonal(&p.domain, orientation).is_some()
                }
            })
            .count()
    }
}
