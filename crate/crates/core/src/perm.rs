//! Permutations in one-line notation, order-preserving reduction, and
//! consecutive pattern containment.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Longest permutation representable; entries are stored as bytes.
pub const MAX_LEN: usize = u8::MAX as usize;

/// A permutation of `{1, ..., n}` written as the word `π(1)π(2)…π(n)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Box<[u8]>);

impl Permutation {
    /// Builds a permutation from its one-line notation, checking that the
    /// entries are exactly `1..=n`.
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty word".into()));
        }
        let mut seen = vec![false; n + 1];
        for &e in &entries {
            let e = e as usize;
            if e == 0 || e > n || seen[e] {
                return Err(Error::InvalidPermutation(format!(
                    "{entries:?} is not a bijection onto 1..={n}"
                )));
            }
            seen[e] = true;
        }
        Ok(Permutation(entries.into_boxed_slice()))
    }

    /// Same as [`Permutation::new`] for wider integer input.
    pub fn from_slice(entries: &[usize]) -> Result<Self> {
        if entries.len() > MAX_LEN {
            return Err(Error::InvalidPermutation(format!(
                "length {} exceeds {MAX_LEN}",
                entries.len()
            )));
        }
        let bytes = entries
            .iter()
            .map(|&e| u8::try_from(e).map_err(|_| Error::InvalidPermutation(format!("entry {e}"))))
            .collect::<Result<Vec<u8>>>()?;
        Permutation::new(bytes)
    }

    pub(crate) fn from_trusted(entries: Vec<u8>) -> Self {
        debug_assert!(Permutation::new(entries.clone()).is_ok());
        Permutation(entries.into_boxed_slice())
    }

    pub fn identity(n: usize) -> Self {
        Permutation::from_trusted((1..=n as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    /// Reduction of the window `[start, start + len)`.
    pub fn window(&self, start: usize, len: usize) -> Permutation {
        reduce_distinct(&self.0[start..start + len])
    }

    /// Whether `sigma` occurs as a consecutive pattern of `self`.
    pub fn contains(&self, sigma: &Permutation) -> bool {
        contains(self, sigma)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for e in self.0.iter() {
                write!(f, "{e}")?;
            }
            Ok(())
        } else {
            let mut first = true;
            for e in self.0.iter() {
                if !first {
                    f.write_str(",")?;
                }
                first = false;
                write!(f, "{e}")?;
            }
            Ok(())
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("`{s}` is not a permutation word"));
        let entries: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<_>>()?
        };
        Permutation::from_slice(&entries)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Relabels pairwise distinct values by `1..=n`, preserving relative order.
///
/// Values that compare equal (or are unordered, such as NaN) make the
/// reduction undefined.
pub fn reduce<T: PartialOrd>(values: &[T]) -> Result<Permutation> {
    if values.is_empty() {
        return Err(Error::InvalidPermutation("cannot reduce an empty sequence".into()));
    }
    if values.len() > MAX_LEN {
        return Err(Error::InvalidPermutation(format!(
            "length {} exceeds {MAX_LEN}",
            values.len()
        )));
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    let mut unordered = None;
    order.sort_by(|&a, &b| {
        values[a].partial_cmp(&values[b]).unwrap_or_else(|| {
            unordered = Some((a.min(b), a.max(b)));
            Ordering::Equal
        })
    });
    if let Some((first, second)) = unordered {
        return Err(Error::DuplicateValue { first, second });
    }
    let mut out = vec![0u8; values.len()];
    for (rank, w) in order.windows(2).enumerate() {
        if values[w[0]] == values[w[1]] {
            return Err(Error::DuplicateValue { first: w[0].min(w[1]), second: w[0].max(w[1]) });
        }
        out[w[0]] = rank as u8 + 1;
    }
    out[*order.last().unwrap()] = values.len() as u8;
    Ok(Permutation::from_trusted(out))
}

/// Reduction of values already known to be distinct.
pub(crate) fn reduce_distinct<T: Ord>(values: &[T]) -> Permutation {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].cmp(&values[b]));
    let mut out = vec![0u8; values.len()];
    for (rank, &i) in order.iter().enumerate() {
        out[i] = rank as u8 + 1;
    }
    Permutation::from_trusted(out)
}

/// True iff `window` is order-isomorphic to `pattern` (same length assumed).
#[inline]
pub(crate) fn order_isomorphic(window: &[u8], pattern: &[u8]) -> bool {
    debug_assert_eq!(window.len(), pattern.len());
    let m = window.len();
    for a in 0..m {
        for b in a + 1..m {
            if (window[a] < window[b]) != (pattern[a] < pattern[b]) {
                return false;
            }
        }
    }
    true
}

/// Consecutive containment: some window of `pi` reduces to `sigma`.
pub fn contains(pi: &Permutation, sigma: &Permutation) -> bool {
    let m = sigma.len();
    if m > pi.len() {
        return false;
    }
    pi.0.windows(m).any(|w| order_isomorphic(w, &sigma.0))
}

/// True iff no pattern is a consecutive subpattern of a different one.
pub fn is_antichain<'a, I>(patterns: I) -> bool
where
    I: IntoIterator<Item = &'a Permutation>,
{
    let mut list: Vec<&Permutation> = patterns.into_iter().collect();
    list.sort();
    list.dedup();
    for (i, a) in list.iter().enumerate() {
        for (j, b) in list.iter().enumerate() {
            if i != j && a.len() <= b.len() && contains(b, a) {
                return false;
            }
        }
    }
    true
}

/// A set of permutations sharing one length, iterated in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSet {
    length: usize,
    members: BTreeSet<Permutation>,
}

impl PatternSet {
    pub fn empty(length: usize) -> Self {
        PatternSet { length, members: BTreeSet::new() }
    }

    pub fn from_iter_checked<I>(length: usize, iter: I) -> Result<Self>
    where
        I: IntoIterator<Item = Permutation>,
    {
        let mut set = PatternSet::empty(length);
        for p in iter {
            set.insert(p)?;
        }
        Ok(set)
    }

    pub(crate) fn from_members(length: usize, members: BTreeSet<Permutation>) -> Self {
        debug_assert!(members.iter().all(|p| p.len() == length));
        PatternSet { length, members }
    }

    pub fn insert(&mut self, p: Permutation) -> Result<bool> {
        if p.len() != self.length {
            return Err(Error::Validation(format!(
                "pattern {p} has length {}, set holds length {}",
                p.len(),
                self.length
            )));
        }
        Ok(self.members.insert(p))
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.members.contains(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Permutation> {
        self.members.iter()
    }

    pub fn members(&self) -> &BTreeSet<Permutation> {
        &self.members
    }

    pub fn is_subset(&self, other: &PatternSet) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("pattern sets always serialize")
    }
}

impl<'a> IntoIterator for &'a PatternSet {
    type Item = &'a Permutation;
    type IntoIter = std::collections::btree_set::Iter<'a, Permutation>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

#[derive(Serialize, Deserialize)]
struct PatternSetRepr {
    n: usize,
    patterns: Vec<Permutation>,
}

impl Serialize for PatternSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PatternSetRepr { n: self.length, patterns: self.members.iter().cloned().collect() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PatternSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PatternSetRepr::deserialize(deserializer)?;
        PatternSet::from_iter_checked(repr.n, repr.patterns).map_err(serde::de::Error::custom)
    }
}

/// Patterns pairwise incomparable under consecutive containment; lengths may differ.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Antichain {
    patterns: Vec<Permutation>,
}

impl Antichain {
    pub fn new<I>(patterns: I) -> Result<Self>
    where
        I: IntoIterator<Item = Permutation>,
    {
        let mut patterns: Vec<Permutation> = patterns.into_iter().collect();
        patterns.sort();
        patterns.dedup();
        if !is_antichain(&patterns) {
            return Err(Error::Validation(
                "patterns are not pairwise incomparable under consecutive containment".into(),
            ));
        }
        Ok(Antichain { patterns })
    }

    /// Parses a comma or whitespace separated list such as `132,231`.
    /// Entries longer than nine must be written with the comma form inside
    /// brackets, e.g. `[10,1,2,3,4,5,6,7,8,9]`.
    pub fn parse_list(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            if let Some(stripped) = rest.strip_prefix('[') {
                let end = stripped
                    .find(']')
                    .ok_or_else(|| Error::Parse(format!("unterminated `[` in `{s}`")))?;
                out.push(stripped[..end].parse()?);
                rest = &stripped[end + 1..];
            } else {
                let end = rest.find([',', ' ']).unwrap_or(rest.len());
                out.push(rest[..end].parse()?);
                rest = &rest[end..];
            }
            rest = rest.trim_start_matches([',', ' ']);
        }
        Antichain::new(out)
    }

    pub fn patterns(&self) -> &[Permutation] {
        &self.patterns
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.patterns.iter().map(Permutation::len).max().unwrap_or(0)
    }

    /// Whether `pi` avoids every pattern of the antichain.
    pub fn avoided_by(&self, pi: &Permutation) -> bool {
        self.patterns.iter().all(|s| !contains(pi, s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn reduce_examples() {
        let r = reduce(&[3.0, 4.2, -2.0, 3f64.sqrt(), 1.0]).unwrap();
        assert_eq!(r, p("45132"));
        assert_eq!(reduce(&[5]).unwrap(), p("1"));
        assert_eq!(reduce(&[0.8, 0.64, 0.9216, 0.28901376]).unwrap(), p("3241"));
    }

    #[test]
    fn reduce_rejects_ties() {
        assert!(matches!(
            reduce(&[1, 3, 1]),
            Err(Error::DuplicateValue { first: 0, second: 2 })
        ));
        assert!(matches!(reduce(&[0.5, f64::NAN]), Err(Error::DuplicateValue { .. })));
        assert!(reduce::<i32>(&[]).is_err());
    }

    #[test]
    fn contains_examples() {
        assert!(contains(&p("45132"), &p("231")));
        assert!(!contains(&p("42135"), &p("132")));
        assert!(contains(&p("42135"), &p("42135")));
        assert!(!contains(&p("12"), &p("123")));
    }

    #[test]
    fn antichain_examples() {
        assert!(is_antichain(&[p("132"), p("231")]));
        assert!(!is_antichain(&[p("12"), p("123")]));
        let b4 = ["1423", "2134", "2143", "3142", "4231"].map(p);
        assert!(is_antichain(&b4));
        assert!(Antichain::new([p("12"), p("123")]).is_err());
    }

    #[test]
    fn text_forms() {
        assert_eq!(p("45132").to_string(), "45132");
        let long = Permutation::from_slice(&[10, 1, 2, 3, 4, 5, 6, 7, 8, 9]).unwrap();
        assert_eq!(long.to_string(), "10,1,2,3,4,5,6,7,8,9");
        assert_eq!(long.to_string().parse::<Permutation>().unwrap(), long);
        assert!("1224".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
        assert!("1a".parse::<Permutation>().is_err());
    }

    #[test]
    fn antichain_list_parsing() {
        let a = Antichain::parse_list("231, 132").unwrap();
        assert_eq!(a.patterns(), &[p("132"), p("231")]);
        let b = Antichain::parse_list("[10,1,2,3,4,5,6,7,8,9],321").unwrap();
        assert_eq!(b.max_len(), 10);
    }

    #[test]
    fn pattern_set_json() {
        let set = PatternSet::from_iter_checked(3, [p("321"), p("123")]).unwrap();
        let json = set.to_json();
        assert_eq!(json, r#"{"n":3,"patterns":["123","321"]}"#);
        let back: PatternSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, set);
        assert!(serde_json::from_str::<PatternSet>(r#"{"n":2,"patterns":["123"]}"#).is_err());
    }
}
