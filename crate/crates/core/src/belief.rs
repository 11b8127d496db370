//! Belief functions over a frame of `c` communities.
//!
//! Subsets of the frame are bitsets ([`FocalSet`]). A [`FocalSetCatalog`]
//! fixes which subsets may carry mass and in which order; mass vectors and
//! credal partitions are aligned with it. The order is: cardinality
//! ascending, then lexicographic on the sorted member indices, so the empty
//! set is first and the whole frame is last.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Largest frame supported by the bitset encoding.
pub const MAX_FRAME: usize = 63;

/// Tolerance on `sum m = 1` when validating mass functions.
pub const MASS_SUM_TOL: f64 = 1e-9;

/// A subset of `{0, .., c-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FocalSet(u64);

impl FocalSet {
    pub const EMPTY: FocalSet = FocalSet(0);

    pub fn from_bits(bits: u64) -> Self {
        FocalSet(bits)
    }

    pub fn singleton(k: usize) -> Self {
        FocalSet(1 << k)
    }

    /// The whole frame `{0, .., c-1}`.
    pub fn full(c: usize) -> Self {
        FocalSet(if c >= 64 { u64::MAX } else { (1u64 << c) - 1 })
    }

    pub fn from_members(members: &[usize]) -> Self {
        FocalSet(members.iter().fold(0, |acc, &k| acc | (1 << k)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn cardinality(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, k: usize) -> bool {
        self.0 >> k & 1 == 1
    }

    pub fn is_subset_of(self, other: FocalSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: FocalSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn complement(self, c: usize) -> FocalSet {
        FocalSet(!self.0 & FocalSet::full(c).0)
    }

    /// Member indices, ascending.
    pub fn members(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |&k| bits >> k & 1 == 1)
    }

    /// Parses the `{1,3}` encoding (1-based members).
    pub fn parse(s: &str) -> Result<FocalSet> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::InvalidParameter(format!("bad focal set {s:?}")))?;
        if inner.trim().is_empty() {
            return Ok(FocalSet::EMPTY);
        }
        let mut bits = 0u64;
        for part in inner.split(',') {
            let k: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad focal set {s:?}")))?;
            if k == 0 || k > MAX_FRAME {
                return Err(Error::InvalidParameter(format!("bad focal set {s:?}")));
            }
            bits |= 1 << (k - 1);
        }
        Ok(FocalSet(bits))
    }
}

/// Sorted 1-based members in braces: `{}`, `{2}`, `{1,3}`.
impl fmt::Display for FocalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, k) in self.members().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", k + 1)?;
        }
        f.write_str("}")
    }
}

/// Ordered list of the subsets of the frame allowed to carry mass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FocalSetCatalog {
    c: usize,
    max_card: usize,
    sets: Vec<FocalSet>,
}

impl FocalSetCatalog {
    /// All `2^c` subsets.
    pub fn full(c: usize) -> Result<Self> {
        Self::with_max_card(c, c)
    }

    /// Subsets of cardinality at most `max_card`, plus the whole frame.
    /// `max_card >= c` gives the full powerset.
    pub fn with_max_card(c: usize, max_card: usize) -> Result<Self> {
        if c == 0 || c > MAX_FRAME {
            return Err(Error::InvalidParameter(format!(
                "frame size {c} outside [1, {MAX_FRAME}]"
            )));
        }
        if max_card == 0 {
            return Err(Error::InvalidParameter(
                "focal cardinality cap must be at least 1".into(),
            ));
        }
        let max_card = max_card.min(c);
        let mut sets = vec![FocalSet::EMPTY];
        for q in 1..=max_card {
            combinations(c, q, &mut |members| sets.push(FocalSet::from_members(members)));
        }
        if max_card < c {
            sets.push(FocalSet::full(c));
        }
        Ok(Self { c, max_card, sets })
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn max_card(&self) -> usize {
        self.max_card
    }

    pub fn is_full(&self) -> bool {
        self.max_card >= self.c
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[FocalSet] {
        &self.sets
    }

    pub fn get(&self, j: usize) -> FocalSet {
        self.sets[j]
    }

    pub fn index_of(&self, set: FocalSet) -> Option<usize> {
        self.sets.iter().position(|&s| s == set)
    }

    /// Catalog index of the singleton `{k}`.
    pub fn singleton_index(&self, k: usize) -> usize {
        1 + k
    }

    /// Index of the whole frame (always last).
    pub fn full_index(&self) -> usize {
        self.sets.len() - 1
    }

    /// Encoded labels of every set, in catalog order.
    pub fn labels(&self) -> Vec<String> {
        self.sets.iter().map(|s| s.to_string()).collect()
    }
}

/// Calls `f` with every `q`-subset of `0..c` in lexicographic order.
fn combinations(c: usize, q: usize, f: &mut dyn FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..q).collect();
    loop {
        f(&idx);
        let mut i = q;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < c - q + i {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..q {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// A basic belief assignment aligned with a catalog (borrowed view).
#[derive(Debug, Clone, Copy)]
pub struct MassFunction<'a> {
    catalog: &'a FocalSetCatalog,
    masses: &'a [f64],
}

impl<'a> MassFunction<'a> {
    /// Checks length, non-negativity and `sum = 1` (within [`MASS_SUM_TOL`]).
    pub fn new(catalog: &'a FocalSetCatalog, masses: &'a [f64]) -> Result<Self> {
        check_row(catalog, masses)?;
        Ok(Self { catalog, masses })
    }

    pub(crate) fn new_unchecked(catalog: &'a FocalSetCatalog, masses: &'a [f64]) -> Self {
        Self { catalog, masses }
    }

    pub fn masses(&self) -> &[f64] {
        self.masses
    }

    pub fn catalog(&self) -> &FocalSetCatalog {
        self.catalog
    }

    pub fn empty_mass(&self) -> f64 {
        self.masses[0]
    }

    /// `Bel(A) = sum over nonempty B ⊆ A of m(B)`.
    pub fn bel(&self, a: FocalSet) -> f64 {
        self.catalog
            .sets()
            .iter()
            .zip(self.masses)
            .filter(|(b, _)| !b.is_empty() && b.is_subset_of(a))
            .map(|(_, m)| m)
            .sum()
    }

    /// `Pl(A) = sum over B with B ∩ A ≠ ∅ of m(B)`.
    pub fn pl(&self, a: FocalSet) -> f64 {
        self.catalog
            .sets()
            .iter()
            .zip(self.masses)
            .filter(|(b, _)| b.intersects(a))
            .map(|(_, m)| m)
            .sum()
    }

    /// Plausibility of every singleton, unnormalized.
    pub fn contour(&self) -> Vec<f64> {
        let mut pl = vec![0.0; self.catalog.c()];
        for (set, &m) in self.catalog.sets().iter().zip(self.masses) {
            for k in set.members() {
                pl[k] += m;
            }
        }
        pl
    }

    /// Pignistic probabilities; fails when `m(∅) = 1`.
    pub fn pignistic(&self) -> Result<Vec<f64>> {
        let conflict = self.empty_mass();
        let denom = 1.0 - conflict;
        if denom <= 0.0 {
            return Err(Error::TotalConflict);
        }
        let mut p = vec![0.0; self.catalog.c()];
        for (set, &m) in self.catalog.sets().iter().zip(self.masses).skip(1) {
            let share = m / (set.cardinality() as f64 * denom);
            for k in set.members() {
                p[k] += share;
            }
        }
        Ok(p)
    }

    /// Index of the max-mass nonempty set; ties go to the earlier (hence
    /// smaller or equally sized) set.
    pub fn argmax_nonempty(&self) -> usize {
        let mut best = 1;
        for j in 2..self.masses.len() {
            if self.masses[j] > self.masses[best] {
                best = j;
            }
        }
        best
    }
}

fn check_row(catalog: &FocalSetCatalog, masses: &[f64]) -> Result<()> {
    if masses.len() != catalog.len() {
        return Err(Error::Dimension(format!(
            "mass vector has {} entries, catalog has {}",
            masses.len(),
            catalog.len()
        )));
    }
    if let Some(m) = masses.iter().find(|m| !(**m >= 0.0)) {
        return Err(Error::InvalidParameter(format!("negative or NaN mass {m}")));
    }
    let sum: f64 = masses.iter().sum();
    if (sum - 1.0).abs() > MASS_SUM_TOL {
        return Err(Error::InvalidParameter(format!("masses sum to {sum}, not 1")));
    }
    Ok(())
}

/// Hard credal decision for one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CredalAssignment {
    /// Catalog index of the winning (nonempty) set.
    pub set_index: usize,
    pub set: FocalSet,
    /// Winning set has more than one community.
    pub imprecise: bool,
}

/// One mass function per node, all over the same catalog.
#[derive(Debug, Clone, PartialEq)]
pub struct CredalPartition {
    catalog: FocalSetCatalog,
    /// n x f
    masses: DMatrix<f64>,
}

impl CredalPartition {
    pub fn new(catalog: FocalSetCatalog, masses: DMatrix<f64>) -> Result<Self> {
        if masses.ncols() != catalog.len() {
            return Err(Error::Dimension(format!(
                "mass matrix has {} columns, catalog has {}",
                masses.ncols(),
                catalog.len()
            )));
        }
        for i in 0..masses.nrows() {
            let row: Vec<f64> = masses.row(i).iter().copied().collect();
            check_row(&catalog, &row)
                .map_err(|e| Error::InvalidParameter(format!("row {i}: {e}")))?;
        }
        Ok(Self { catalog, masses })
    }

    pub(crate) fn new_unchecked(catalog: FocalSetCatalog, masses: DMatrix<f64>) -> Self {
        Self { catalog, masses }
    }

    /// Certain partition: node `i` puts all its mass on `{labels[i]}`.
    pub fn from_hard_labels(c: usize, labels: &[usize]) -> Result<Self> {
        let catalog = FocalSetCatalog::full(c)?;
        let mut m = DMatrix::zeros(labels.len(), catalog.len());
        for (i, &l) in labels.iter().enumerate() {
            if l >= c {
                return Err(Error::InvalidParameter(format!("label {l} >= c = {c}")));
            }
            m[(i, catalog.singleton_index(l))] = 1.0;
        }
        Ok(Self::new_unchecked(catalog, m))
    }

    pub fn n(&self) -> usize {
        self.masses.nrows()
    }

    pub fn c(&self) -> usize {
        self.catalog.c()
    }

    pub fn catalog(&self) -> &FocalSetCatalog {
        &self.catalog
    }

    pub fn masses(&self) -> &DMatrix<f64> {
        &self.masses
    }

    pub fn row_vec(&self, i: usize) -> Vec<f64> {
        self.masses.row(i).iter().copied().collect()
    }

    pub fn empty_masses(&self) -> Vec<f64> {
        self.masses.column(0).iter().copied().collect()
    }

    /// Applies `f` to each node's mass function.
    pub fn map_rows<T>(&self, mut f: impl FnMut(MassFunction<'_>) -> T) -> Vec<T> {
        (0..self.n())
            .map(|i| {
                let row = self.row_vec(i);
                f(MassFunction::new_unchecked(&self.catalog, &row))
            })
            .collect()
    }

    /// n x c plausibilities of singletons. With `normalized`, row i is divided
    /// by `1 - m_i(∅)`.
    pub fn contour_matrix(&self, normalized: bool) -> DMatrix<f64> {
        let n = self.n();
        let c = self.c();
        let mut pl = DMatrix::zeros(n, c);
        for (j, set) in self.catalog.sets().iter().enumerate() {
            for k in set.members() {
                for i in 0..n {
                    pl[(i, k)] += self.masses[(i, j)];
                }
            }
        }
        if normalized {
            for i in 0..n {
                let denom = 1.0 - self.masses[(i, 0)];
                if denom > 0.0 {
                    pl.row_mut(i).scale_mut(1.0 / denom);
                }
            }
        }
        pl
    }

    /// n x c pignistic probabilities.
    pub fn pignistic_matrix(&self) -> Result<DMatrix<f64>> {
        let rows = self.map_rows(|m| m.pignistic());
        let mut out = DMatrix::zeros(self.n(), self.c());
        for (i, row) in rows.into_iter().enumerate() {
            for (k, p) in row?.into_iter().enumerate() {
                out[(i, k)] = p;
            }
        }
        Ok(out)
    }

    /// Max-mass nonempty set per node.
    pub fn hard_credal_assignment(&self) -> Vec<CredalAssignment> {
        self.map_rows(|m| {
            let j = m.argmax_nonempty();
            let set = self.catalog.get(j);
            CredalAssignment {
                set_index: j,
                set,
                imprecise: set.cardinality() > 1,
            }
        })
    }

    /// Nodes whose empty-set mass exceeds `threshold`.
    pub fn outliers(&self, threshold: f64) -> Vec<bool> {
        self.empty_masses().iter().map(|&m| m > threshold).collect()
    }
}

/// Convenience: hard credal assignment of a partition.
pub fn hard_credal_assignment(p: &CredalPartition) -> Vec<CredalAssignment> {
    p.hard_credal_assignment()
}
