//! The bipath poset, its five interval families, bipath modules, the
//! covering map onto the poset from the zigzag, and arc codes.
//!
//! A bipath poset `B(n, m)` has vertices `{0, .., n+m-1}` ordered by two
//! maximal chains `0 < 1 < .. < n` (top) and `0 < n+m-1 < .. < n+1 < n`
//! (bottom). Every persistence module over it is a direct sum of interval
//! modules; the multiset of intervals is the module's *arc code*.
//!
//! The covering map wraps the infinite zigzag poset around the bipath with
//! period `N = n + m - 1`. Restricting a module along a finite slice of
//! `2n + 4m - 3` zigzag vertices loses no information: each bipath
//! interval's multiplicity equals the multiplicity of one specific slice
//! bar, tabulated in [`table_slice_interval`]. [`BipathModule::arc_code`]
//! decomposes the slice restriction, reads multiplicities off that table,
//! and then cross-checks by re-expanding the arc code into the full
//! expected slice barcode — a deliberately redundant step that catches any
//! index-convention slip loudly instead of silently mislabelling bars.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{FieldSpec, LinalgError, Matrix, random_invertible_with};
use crate::zigzag::{DecInterval, DecKind, ZigzagRep, ZigzagShape, ZzBarcode, vertex_point};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BipathError {
    #[error("invalid bipath poset: n = {0}, m = {1} (need n >= 2, m >= 1)")]
    InvalidPoset(usize, usize),
    #[error("invalid interval {0} for this poset")]
    InvalidInterval(String),
    #[error("point ({0}, {1}) is not on the zigzag")]
    InvalidPoint(i64, i64),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("module does not commute: top composite differs from bottom composite")]
    NonCommuting,
    #[error("arc-code cross-check failed: {0}")]
    CrossCheck(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The poset `B(n, m)`. `n >= 2`; `m >= 1` is accepted, with `m = 1`
/// meaning the bottom chain has no interior vertices (its arrow runs
/// straight from 0 to n) so bottom intervals are vacuous.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipathPoset {
    n: usize,
    m: usize,
}

impl BipathPoset {
    pub fn new(n: usize, m: usize) -> Result<Self, BipathError> {
        if n < 2 || m < 1 {
            return Err(BipathError::InvalidPoset(n, m));
        }
        Ok(BipathPoset { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertex_count(&self) -> usize {
        self.n + self.m
    }

    /// The covering-map period `N = n + m - 1`.
    pub fn period(&self) -> usize {
        self.n + self.m - 1
    }

    pub fn is_top_interior(&self, v: usize) -> bool {
        (1..self.n).contains(&v)
    }

    pub fn is_bottom_interior(&self, v: usize) -> bool {
        v > self.n && v < self.n + self.m
    }

    /// Partial order of `B(n, m)`.
    pub fn le(&self, u: usize, v: usize) -> bool {
        if u == v || u == 0 || v == self.n {
            return true;
        }
        if v == 0 || u == self.n {
            return false;
        }
        if self.is_top_interior(u) && self.is_top_interior(v) {
            u <= v
        } else if self.is_bottom_interior(u) && self.is_bottom_interior(v) {
            u >= v
        } else {
            false
        }
    }

    /// Hasse arrows in storage order: the top chain ascending, then the
    /// bottom chain in poset-ascending order `0 -> n+m-1 -> .. -> n+1 -> n`
    /// (just `0 -> n` when m = 1).
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (0..self.n).map(|i| (i, i + 1)).collect();
        if self.m == 1 {
            out.push((0, self.n));
        } else {
            out.push((0, self.n + self.m - 1));
            for v in (self.n + 2..=self.n + self.m - 1).rev() {
                out.push((v, v - 1));
            }
            out.push((self.n + 1, self.n));
        }
        out
    }

    pub fn arrow_index(&self, src: usize, dst: usize) -> Option<usize> {
        self.arrows()
            .iter()
            .position(|&(s, d)| (s, d) == (src, dst))
    }

    /// Length of the finite zigzag slice: `2n + 4m - 3`.
    pub fn slice_len(&self) -> usize {
        2 * self.n + 4 * self.m - 3
    }

    pub fn slice_shape(&self) -> ZigzagShape {
        ZigzagShape::alternating(self.slice_len())
    }

    /// Off-diagonal coordinate of slice vertex 0, i.e. vertex 0 is the
    /// zigzag point `(-m+2, -m+1)`.
    pub fn slice_offset(&self) -> i64 {
        -(self.m as i64) + 1
    }

    /// The covering map: sends a zigzag point `(a, b)` (with `a = b` or
    /// `a = b + 1`) to a bipath vertex, periodically with period `N`.
    pub fn covering_vertex(&self, a: i64, b: i64) -> Result<usize, BipathError> {
        let n = self.n as i64;
        let m = self.m as i64;
        let period = self.period() as i64;
        if a == b + 1 {
            // off-diagonal: canonical window t0 in [-m+1, n-1]
            let lo = -m + 1;
            let t0 = lo + (b - lo).rem_euclid(period);
            Ok(if t0 == 0 {
                0
            } else if t0 > 0 {
                t0 as usize
            } else {
                (n + m + t0) as usize
            })
        } else if a == b {
            // diagonal: canonical window t0 in [-m+2, n]
            let lo = -m + 2;
            let t0 = lo + (a - lo).rem_euclid(period);
            Ok(if t0 >= 1 && t0 <= n {
                t0 as usize
            } else {
                (n + m - 1 + t0) as usize
            })
        } else {
            Err(BipathError::InvalidPoint(a, b))
        }
    }
}

/// One of the five interval families of the bipath poset.
///
/// * `Full` — the whole poset.
/// * `Left { i, j }` — everything below `i` on the top chain and below `j`
///   on the bottom chain; `i` in `0..n`, `j` either 0 or a bottom interior
///   vertex. Always contains 0, never n.
/// * `Right { i, j }` — everything above `i` on the top chain and above `j`
///   on the bottom chain; `i` in `1..=n`, `j` either n or bottom interior.
///   Always contains n, never 0.
/// * `Top { i, j }` — the top-chain segment `{i, .., j}`, `1 <= i <= j <= n-1`.
/// * `Bottom { i, j }` — the bottom-chain segment `{i, .., j}` in numeric
///   labels (poset-descending), both interior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BipathInterval {
    Full,
    Left { i: usize, j: usize },
    Right { i: usize, j: usize },
    Top { i: usize, j: usize },
    Bottom { i: usize, j: usize },
}

impl BipathInterval {
    pub fn validate(&self, poset: &BipathPoset) -> Result<(), BipathError> {
        let n = poset.n();
        let ok = match *self {
            BipathInterval::Full => true,
            BipathInterval::Left { i, j } => i < n && (j == 0 || poset.is_bottom_interior(j)),
            BipathInterval::Right { i, j } => {
                (1..=n).contains(&i) && (j == n || poset.is_bottom_interior(j))
            }
            BipathInterval::Top { i, j } => i >= 1 && i <= j && j < n,
            BipathInterval::Bottom { i, j } => {
                poset.is_bottom_interior(i) && poset.is_bottom_interior(j) && i <= j
            }
        };
        if ok {
            Ok(())
        } else {
            Err(BipathError::InvalidInterval(self.to_string()))
        }
    }

    pub fn support(&self, poset: &BipathPoset) -> BTreeSet<usize> {
        let n = poset.n();
        let top = poset.vertex_count() - 1;
        match *self {
            BipathInterval::Full => (0..poset.vertex_count()).collect(),
            BipathInterval::Left { i, j } => {
                let mut s: BTreeSet<usize> = (0..=i).collect();
                if j != 0 {
                    s.extend(j..=top);
                }
                s
            }
            BipathInterval::Right { i, j } => {
                let mut s: BTreeSet<usize> = (i..=n).collect();
                if j != n {
                    s.extend(n + 1..=j);
                }
                s
            }
            BipathInterval::Top { i, j } => (i..=j).collect(),
            BipathInterval::Bottom { i, j } => (i..=j).collect(),
        }
    }

    pub fn contains(&self, poset: &BipathPoset, v: usize) -> bool {
        self.support(poset).contains(&v)
    }

    pub fn kind_label(&self) -> &'static str {
        match self {
            BipathInterval::Full => "full",
            BipathInterval::Left { .. } => "left",
            BipathInterval::Right { .. } => "right",
            BipathInterval::Top { .. } => "top",
            BipathInterval::Bottom { .. } => "bottom",
        }
    }

    pub fn labels(&self) -> Option<(usize, usize)> {
        match *self {
            BipathInterval::Full => None,
            BipathInterval::Left { i, j }
            | BipathInterval::Right { i, j }
            | BipathInterval::Top { i, j }
            | BipathInterval::Bottom { i, j } => Some((i, j)),
        }
    }
}

impl fmt::Display for BipathInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.labels() {
            None => write!(f, "full"),
            Some((i, j)) => write!(f, "{}({i},{j})", self.kind_label()),
        }
    }
}

/// Every interval of the poset, each exactly once, in canonical order.
pub fn enumerate_intervals(poset: &BipathPoset) -> Vec<BipathInterval> {
    let n = poset.n();
    let m = poset.m();
    let mut out = vec![BipathInterval::Full];
    let bottoms: Vec<usize> = (n + 1..n + m).collect();
    for i in 0..n {
        out.push(BipathInterval::Left { i, j: 0 });
        for &j in &bottoms {
            out.push(BipathInterval::Left { i, j });
        }
    }
    for i in 1..=n {
        out.push(BipathInterval::Right { i, j: n });
        for &j in &bottoms {
            out.push(BipathInterval::Right { i, j });
        }
    }
    for i in 1..n {
        for j in i..n {
            out.push(BipathInterval::Top { i, j });
        }
    }
    for (bi, &i) in bottoms.iter().enumerate() {
        for &j in &bottoms[bi..] {
            out.push(BipathInterval::Bottom { i, j });
        }
    }
    out.sort();
    out
}

/// Multiset of bipath intervals with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ArcCode {
    entries: BTreeMap<BipathInterval, usize>,
}

impl ArcCode {
    pub fn new() -> Self {
        ArcCode::default()
    }

    pub fn add(&mut self, iv: BipathInterval, mult: usize) {
        if mult > 0 {
            *self.entries.entry(iv).or_insert(0) += mult;
        }
    }

    pub fn multiplicity(&self, iv: &BipathInterval) -> usize {
        self.entries.get(iv).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BipathInterval, &usize)> {
        self.entries.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn dim_at(&self, poset: &BipathPoset, v: usize) -> usize {
        self.entries
            .iter()
            .filter(|(iv, _)| iv.contains(poset, v))
            .map(|(_, m)| m)
            .sum()
    }
}

impl FromIterator<(BipathInterval, usize)> for ArcCode {
    fn from_iter<T: IntoIterator<Item = (BipathInterval, usize)>>(iter: T) -> Self {
        let mut ac = ArcCode::new();
        for (iv, m) in iter {
            ac.add(iv, m);
        }
        ac
    }
}

/// The slice bar whose multiplicity equals the given interval's arc-code
/// multiplicity. This is the read-off table of the decomposition theorem;
/// endpoints are in zigzag coordinates (`N = n + m - 1` periodic picture).
pub fn table_slice_interval(poset: &BipathPoset, iv: &BipathInterval) -> DecInterval {
    let n = poset.n() as i64;
    let m = poset.m() as i64;
    match *iv {
        BipathInterval::Full => DecInterval::new(DecKind::OpenOpen, -m + 1, n + m),
        BipathInterval::Left { i, j: 0 } => DecInterval::new(DecKind::OpenOpen, 0, i as i64 + 1),
        BipathInterval::Left { i, j } => {
            DecInterval::new(DecKind::OpenOpen, j as i64 - n - m, i as i64 + 1)
        }
        BipathInterval::Right { i, j } => {
            DecInterval::new(DecKind::ClosedClosed, i as i64, j as i64)
        }
        BipathInterval::Top { i, j } => {
            DecInterval::new(DecKind::ClosedOpen, i as i64, j as i64 + 1)
        }
        BipathInterval::Bottom { i, j } => {
            DecInterval::new(DecKind::OpenClosed, i as i64 - 1, j as i64)
        }
    }
}

/// The complete slice barcode of a single interval module: what
/// `restrict_to_slice(k iv)` decomposes into. Most families restrict to one
/// or two bars; note that the left `j = 0` family picks up a companion bar
/// at the very last slice vertex, which also lies over vertex 0 (the
/// covering map sends `(N+1, N)` to 0).
pub fn slice_restriction_bars(poset: &BipathPoset, iv: &BipathInterval) -> Vec<DecInterval> {
    let n = poset.n() as i64;
    let m = poset.m() as i64;
    let period = poset.period() as i64;
    match *iv {
        BipathInterval::Full => vec![DecInterval::new(DecKind::OpenOpen, -m + 1, n + m)],
        BipathInterval::Left { i, j: 0 } => vec![
            DecInterval::new(DecKind::OpenOpen, 0, i as i64 + 1),
            DecInterval::new(DecKind::OpenOpen, period, n + m),
        ],
        BipathInterval::Left { i, j } => vec![
            DecInterval::new(DecKind::OpenOpen, j as i64 - n - m, i as i64 + 1),
            DecInterval::new(DecKind::OpenOpen, j as i64 - 1, n + m),
        ],
        BipathInterval::Right { i, j } if j == poset.n() => {
            vec![DecInterval::new(DecKind::ClosedClosed, i as i64, n)]
        }
        BipathInterval::Right { i, j } => vec![
            DecInterval::new(DecKind::ClosedClosed, i as i64, j as i64),
            DecInterval::new(DecKind::OpenClosed, -m + 1, j as i64 - n - m + 1),
        ],
        BipathInterval::Top { i, j } => {
            vec![DecInterval::new(
                DecKind::ClosedOpen,
                i as i64,
                j as i64 + 1,
            )]
        }
        BipathInterval::Bottom { i, j } => vec![
            DecInterval::new(DecKind::OpenClosed, i as i64 - 1, j as i64),
            DecInterval::new(DecKind::OpenClosed, i as i64 - n - m, j as i64 - n - m + 1),
        ],
    }
}

/// A persistence module over a bipath poset: a dimension per vertex and a
/// matrix per Hasse arrow, in the poset's storage order. The two chain
/// composites from 0 to n must agree (they both realize the unique map of
/// the underlying functor).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipathModule {
    pub poset: BipathPoset,
    pub field: FieldSpec,
    pub dims: Vec<usize>,
    pub arrows: Vec<Matrix>,
}

impl BipathModule {
    pub fn zero(poset: BipathPoset, field: FieldSpec) -> Self {
        let dims = vec![0; poset.vertex_count()];
        let arrows = poset.arrows().iter().map(|_| Matrix::zeros(0, 0)).collect();
        BipathModule {
            poset,
            field,
            dims,
            arrows,
        }
    }

    pub fn validate(&self) -> Result<(), BipathError> {
        let arrows = self.poset.arrows();
        if self.dims.len() != self.poset.vertex_count() || self.arrows.len() != arrows.len() {
            return Err(BipathError::InvalidModule("dims/arrows length".into()));
        }
        for (k, &(s, d)) in arrows.iter().enumerate() {
            let m = &self.arrows[k];
            if m.rows() != self.dims[d] || m.cols() != self.dims[s] {
                return Err(BipathError::InvalidModule(format!(
                    "arrow {s}->{d}: expected {}x{}, got {}x{}",
                    self.dims[d],
                    self.dims[s],
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.entries_canonical(self.field) {
                return Err(BipathError::InvalidModule(format!(
                    "arrow {s}->{d}: entries not reduced mod p"
                )));
            }
        }
        if self.top_composite()? != self.bottom_composite()? {
            return Err(BipathError::NonCommuting);
        }
        Ok(())
    }

    /// Reinterprets the module over another prime field. Refused unless
    /// every stored entry is already a canonical scalar of the new field, so
    /// matrices are never silently rewritten.
    pub fn with_field(&self, field: FieldSpec) -> Result<BipathModule, BipathError> {
        if !self.arrows.iter().all(|m| m.entries_canonical(field)) {
            return Err(BipathError::InvalidModule(format!(
                "entries not reduced mod {}",
                field.modulus()
            )));
        }
        Ok(BipathModule {
            field,
            ..self.clone()
        })
    }

    /// Composite along `0 -> 1 -> .. -> n`.
    pub fn top_composite(&self) -> Result<Matrix, BipathError> {
        let mut acc = Matrix::identity(self.dims[0]);
        for k in 0..self.poset.n() {
            acc = self.arrows[k].mat_mul(&acc, self.field)?;
        }
        Ok(acc)
    }

    /// Composite along `0 -> n+m-1 -> .. -> n+1 -> n`.
    pub fn bottom_composite(&self) -> Result<Matrix, BipathError> {
        let mut acc = Matrix::identity(self.dims[0]);
        for k in self.poset.n()..self.poset.arrows().len() {
            acc = self.arrows[k].mat_mul(&acc, self.field)?;
        }
        Ok(acc)
    }

    /// The interval module `k iv`: one-dimensional on the support with
    /// identity arrows inside, zero outside.
    pub fn interval_module(
        poset: BipathPoset,
        field: FieldSpec,
        iv: &BipathInterval,
    ) -> Result<Self, BipathError> {
        iv.validate(&poset)?;
        let support = iv.support(&poset);
        let dims: Vec<usize> = (0..poset.vertex_count())
            .map(|v| usize::from(support.contains(&v)))
            .collect();
        let arrows = poset
            .arrows()
            .iter()
            .map(|&(s, d)| {
                if support.contains(&s) && support.contains(&d) {
                    Matrix::identity(1)
                } else {
                    Matrix::zeros(dims[d], dims[s])
                }
            })
            .collect();
        let module = BipathModule {
            poset,
            field,
            dims,
            arrows,
        };
        module.validate()?;
        Ok(module)
    }

    pub fn direct_sum(&self, other: &BipathModule) -> Result<BipathModule, BipathError> {
        if self.poset != other.poset || self.field != other.field {
            return Err(BipathError::InvalidModule(
                "poset/field mismatch in direct sum".into(),
            ));
        }
        let dims: Vec<usize> = self
            .dims
            .iter()
            .zip(&other.dims)
            .map(|(a, b)| a + b)
            .collect();
        let arrows = self
            .poset
            .arrows()
            .iter()
            .enumerate()
            .map(|(k, &(s, d))| {
                let (a, b) = (&self.arrows[k], &other.arrows[k]);
                let mut m = Matrix::zeros(dims[d], dims[s]);
                for r in 0..a.rows() {
                    for c in 0..a.cols() {
                        m.set(r, c, a.get(r, c));
                    }
                }
                for r in 0..b.rows() {
                    for c in 0..b.cols() {
                        m.set(self.dims[d] + r, self.dims[s] + c, b.get(r, c));
                    }
                }
                m
            })
            .collect();
        Ok(BipathModule {
            poset: self.poset,
            field: self.field,
            dims,
            arrows,
        })
    }

    /// Conjugates every arrow by invertible per-vertex bases; the result is
    /// isomorphic to `self`.
    pub fn change_basis(&self, bases: &[Matrix]) -> Result<BipathModule, BipathError> {
        if bases.len() != self.dims.len() {
            return Err(BipathError::InvalidModule("bases length".into()));
        }
        let mut inverses = Vec::with_capacity(bases.len());
        for (v, b) in bases.iter().enumerate() {
            if b.rows() != self.dims[v] || b.cols() != self.dims[v] {
                return Err(BipathError::InvalidModule(format!(
                    "basis at vertex {v} has wrong shape"
                )));
            }
            inverses.push(b.inverse(self.field).map_err(|_| {
                BipathError::InvalidModule(format!("basis at vertex {v} not invertible"))
            })?);
        }
        let arrows = self
            .poset
            .arrows()
            .iter()
            .enumerate()
            .map(|(k, &(s, d))| {
                bases[d]
                    .mat_mul(&self.arrows[k], self.field)
                    .and_then(|m| m.mat_mul(&inverses[s], self.field))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BipathModule {
            poset: self.poset,
            field: self.field,
            dims: self.dims.clone(),
            arrows,
        })
    }

    /// Restriction along the covering map to the finite slice. Slice vertex
    /// `v` carries the space at its covering image; an edge carries the
    /// identity when both endpoints cover the same vertex and the stored
    /// Hasse-arrow matrix otherwise.
    pub fn restrict_to_slice(&self) -> Result<ZigzagRep, BipathError> {
        self.validate()?;
        let shape = self.poset.slice_shape();
        let offset = self.poset.slice_offset();
        let len = shape.len();
        let cover: Vec<usize> = (0..len)
            .map(|v| {
                let (a, b) = vertex_point(v, offset);
                self.poset
                    .covering_vertex(a, b)
                    .expect("slice points are on the zigzag")
            })
            .collect();
        let dims: Vec<usize> = cover.iter().map(|&z| self.dims[z]).collect();
        let mut maps = Vec::with_capacity(shape.edge_count());
        for e in 0..shape.edge_count() {
            let (s, t) = (shape.source(e), shape.target(e));
            let (zs, zt) = (cover[s], cover[t]);
            let m = if zs == zt {
                Matrix::identity(self.dims[zs])
            } else {
                let k = self
                    .poset
                    .arrow_index(zs, zt)
                    .unwrap_or_else(|| panic!("covering image {zs}->{zt} is not a Hasse arrow"));
                self.arrows[k].clone()
            };
            maps.push(m);
        }
        Ok(ZigzagRep {
            shape,
            field: self.field,
            dims,
            maps,
        })
    }

    /// The arc code: decompose the slice restriction, read each interval's
    /// multiplicity off its table bar, and verify the whole slice barcode is
    /// reproduced by re-expanding the result through the per-interval
    /// restriction bars.
    pub fn arc_code(&self) -> Result<ArcCode, BipathError> {
        let slice = self.restrict_to_slice()?;
        let barcode = slice.barcode();
        decode_slice_barcode(&self.poset, &barcode, table_slice_interval)
    }
}

/// Reads an arc code out of a slice barcode using `translate` to locate each
/// interval's bar, then cross-checks the translation by re-expanding. The
/// translation is a parameter so self-tests can inject a skewed table and
/// watch the cross-check refuse it.
pub fn decode_slice_barcode(
    poset: &BipathPoset,
    barcode: &ZzBarcode,
    translate: impl Fn(&BipathPoset, &BipathInterval) -> DecInterval,
) -> Result<ArcCode, BipathError> {
    let offset = poset.slice_offset();
    let len = poset.slice_len();
    let mut ac = ArcCode::new();
    for iv in enumerate_intervals(poset) {
        let dec = translate(poset, &iv);
        let range = dec.to_range(offset, len).ok_or_else(|| {
            BipathError::CrossCheck(format!("table bar {dec} for {iv} is outside the slice"))
        })?;
        ac.add(iv, barcode.multiplicity(&range));
    }

    // Re-expand and compare, bar for bar.
    let mut expected = ZzBarcode::new();
    for (iv, &mult) in ac.iter() {
        for dec in slice_restriction_bars(poset, iv) {
            let range = dec.to_range(offset, len).ok_or_else(|| {
                BipathError::CrossCheck(format!(
                    "restriction bar {dec} for {iv} is outside the slice"
                ))
            })?;
            expected.add(range, mult);
        }
    }
    if &expected != barcode {
        return Err(BipathError::CrossCheck(format!(
            "expanded arc code does not reproduce the slice barcode \
             (expected {expected:?}, computed {barcode:?})"
        )));
    }
    Ok(ac)
}

/// Plants a known arc code: a direct sum of uniformly chosen interval
/// modules, conjugated by a random invertible basis at every vertex.
pub fn plant_random(
    poset: BipathPoset,
    field: FieldSpec,
    max_summands: usize,
    seed: u64,
) -> (BipathModule, ArcCode) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = if max_summands == 0 {
        0
    } else {
        rng.random_range(0..=max_summands)
    };
    let intervals = enumerate_intervals(&poset);
    let mut module = BipathModule::zero(poset, field);
    let mut planted = ArcCode::new();
    for _ in 0..count {
        let iv = intervals[rng.random_range(0..intervals.len())];
        planted.add(iv, 1);
        let summand = BipathModule::interval_module(poset, field, &iv).expect("enumerated");
        module = module.direct_sum(&summand).expect("same poset");
    }
    let bases: Vec<Matrix> = module
        .dims
        .iter()
        .map(|&d| random_invertible_with(d, field, &mut rng))
        .collect();
    let module = module.change_basis(&bases).expect("invertible bases");
    (module, planted)
}
