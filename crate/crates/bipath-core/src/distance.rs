//! Interleaving and bottleneck distances between bipath modules.
//!
//! Arc-code intervals correspond to Z-orbits of bars of an infinite periodic
//! zigzag; each bar extends to a *block* of the poset `U = {(a, b) : a <= b}`
//! (with the first coordinate order reversed), and the distance between two
//! modules is the bottleneck distance between the block multisets, matched
//! orbit against orbit. Matchings may be taken equivariant for the Z action,
//! so one representative per orbit plus the period is all the matcher needs;
//! types are preserved by any finite-cost matching, so cross-kind pair costs
//! are infinite.
//!
//! The epsilon-interleaving predicate between two block modules is decided
//! exactly: blocks are regions of `U` cut out by one interval constraint per
//! coordinate, morphisms between interval modules are scalar multiples of
//! the overlap-supported morphism, and the interleaving equations reduce to
//! overlap/containment tests among epsilon-transformed regions. Closed-form
//! pair and deletion costs are derived per kind and are validated against a
//! sweep of the predicate over an epsilon grid in the test suites.

use std::fmt;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::bipath::{ArcCode, BipathInterval, BipathPoset};
use crate::zigzag::{DecInterval, DecKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DistanceError {
    #[error("epsilon must be non-negative")]
    NegativeEps,
    #[error("orbit periods differ: {0} vs {1}")]
    PeriodMismatch(i64, i64),
}

/// Extended rational: finite values plus the two infinities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum XRat {
    NegInf,
    Fin(Rational64),
    PosInf,
}

impl XRat {
    pub fn int(v: i64) -> Self {
        XRat::Fin(Rational64::from_integer(v))
    }

    pub fn zero() -> Self {
        XRat::int(0)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, XRat::Fin(_))
    }

    pub fn finite(&self) -> Option<Rational64> {
        match self {
            XRat::Fin(r) => Some(*r),
            _ => None,
        }
    }

    pub fn add_rat(&self, r: Rational64) -> XRat {
        match self {
            XRat::Fin(v) => XRat::Fin(v + r),
            other => *other,
        }
    }

    /// `self - other` for widths: well-defined here because widths always
    /// have `other <= self`.
    fn sub_for_width(&self, other: &XRat) -> XRat {
        match (self, other) {
            (XRat::Fin(a), XRat::Fin(b)) => XRat::Fin(a - b),
            _ => XRat::PosInf,
        }
    }

    fn div_int(&self, d: i64) -> XRat {
        match self {
            XRat::Fin(v) => XRat::Fin(v / Rational64::from_integer(d)),
            other => *other,
        }
    }

    /// `|a - b|`, with equal infinities at distance zero.
    pub fn abs_diff(a: &XRat, b: &XRat) -> XRat {
        match (a, b) {
            (XRat::Fin(x), XRat::Fin(y)) => XRat::Fin((x - y).abs()),
            (XRat::PosInf, XRat::PosInf) | (XRat::NegInf, XRat::NegInf) => XRat::zero(),
            _ => XRat::PosInf,
        }
    }

    /// Infinity-aware addition for the triangle inequality.
    pub fn add(a: &XRat, b: &XRat) -> XRat {
        match (a, b) {
            (XRat::Fin(x), XRat::Fin(y)) => XRat::Fin(x + y),
            _ => XRat::PosInf,
        }
    }
}

impl fmt::Display for XRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XRat::NegInf => write!(f, "-inf"),
            XRat::PosInf => write!(f, "inf"),
            XRat::Fin(r) => write!(f, "{r}"),
        }
    }
}

/// A block of `U`, named by the same four decorations as zigzag bars:
/// `cc = [a,b]`, `co = [a,b)`, `oc = (a,b]`, `oo = (a,b)`. The whole-poset
/// block is `cc` with endpoints `-inf, +inf`. The zero module is encoded as
/// the distinguished empty block `oo` with `a = b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Block {
    pub kind: DecKind,
    pub lo: XRat,
    pub hi: XRat,
}

impl Block {
    pub fn new(kind: DecKind, lo: XRat, hi: XRat) -> Self {
        debug_assert!(lo <= hi);
        Block { kind, lo, hi }
    }

    pub fn from_ints(kind: DecKind, a: i64, b: i64) -> Self {
        Block::new(kind, XRat::int(a), XRat::int(b))
    }

    /// Extension of the full zigzag: the whole block poset.
    pub fn whole() -> Self {
        Block {
            kind: DecKind::ClosedClosed,
            lo: XRat::NegInf,
            hi: XRat::PosInf,
        }
    }

    /// The distinguished empty block standing in for the zero module.
    pub fn zero_module() -> Self {
        Block {
            kind: DecKind::OpenOpen,
            lo: XRat::zero(),
            hi: XRat::zero(),
        }
    }

    pub fn width(&self) -> XRat {
        self.hi.sub_for_width(&self.lo)
    }

    pub fn shift(&self, delta: i64) -> Block {
        let d = Rational64::from_integer(delta);
        Block {
            kind: self.kind,
            lo: self.lo.add_rat(d),
            hi: self.hi.add_rat(d),
        }
    }

    fn region(&self) -> Region {
        let (c, d) = match self.kind {
            // [a,b]: c <= b, d >= a
            DecKind::ClosedClosed => (
                Iv::new(Bound::neg_inf(), Bound::hi(self.hi, true)),
                Iv::new(Bound::lo(self.lo, true), Bound::pos_inf()),
            ),
            // [a,b): a <= d < b
            DecKind::ClosedOpen => (
                Iv::full(),
                Iv::new(Bound::lo(self.lo, true), Bound::hi(self.hi, false)),
            ),
            // (a,b]: a < c <= b
            DecKind::OpenClosed => (
                Iv::new(Bound::lo(self.lo, false), Bound::hi(self.hi, true)),
                Iv::full(),
            ),
            // (a,b): c > a, d < b
            DecKind::OpenOpen => (
                Iv::new(Bound::lo(self.lo, false), Bound::pos_inf()),
                Iv::new(Bound::neg_inf(), Bound::hi(self.hi, false)),
            ),
        };
        Region::new(c, d)
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (l, r) = match self.kind {
            DecKind::ClosedClosed => ('[', ']'),
            DecKind::ClosedOpen => ('[', ')'),
            DecKind::OpenClosed => ('(', ']'),
            DecKind::OpenOpen => ('(', ')'),
        };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

/// Kind-preserving block extension of a decorated zigzag bar.
pub fn block_extend(iv: &DecInterval) -> Block {
    Block::from_ints(iv.kind, iv.a, iv.b)
}

// ---------------------------------------------------------------------------
// Exact region arithmetic on U.
//
// Every block, every epsilon-transform of one, and every intersection of
// those is Rect(C, D) ∩ U for two extended-rational intervals C (the first
// coordinate) and D (the second). Normalizing materializes the c <= d
// coupling, after which projections, subsets and up/down closures are plain
// interval computations.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Bound {
    v: XRat,
    closed: bool,
}

impl Bound {
    /// Infinite endpoints are never attained, so a closed bound at an
    /// infinity normalizes to an open one.
    fn lo(v: XRat, closed: bool) -> Bound {
        Bound {
            v,
            closed: closed && v != XRat::NegInf,
        }
    }

    fn hi(v: XRat, closed: bool) -> Bound {
        Bound {
            v,
            closed: closed && v != XRat::PosInf,
        }
    }

    fn neg_inf() -> Bound {
        Bound {
            v: XRat::NegInf,
            closed: false,
        }
    }

    fn pos_inf() -> Bound {
        Bound {
            v: XRat::PosInf,
            closed: false,
        }
    }

    fn shift(&self, d: Rational64) -> Bound {
        Bound {
            v: self.v.add_rat(d),
            closed: self.closed,
        }
    }
}

/// Interval with a lower and an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Iv {
    lo: Bound,
    hi: Bound,
}

impl Iv {
    fn new(lo: Bound, hi: Bound) -> Iv {
        Iv { lo, hi }
    }

    fn full() -> Iv {
        Iv::new(Bound::neg_inf(), Bound::pos_inf())
    }

    fn is_empty(&self) -> bool {
        self.lo.v > self.hi.v || (self.lo.v == self.hi.v && !(self.lo.closed && self.hi.closed))
    }

    fn intersect(&self, other: &Iv) -> Iv {
        let lo = match self.lo.v.cmp(&other.lo.v) {
            std::cmp::Ordering::Greater => self.lo,
            std::cmp::Ordering::Less => other.lo,
            std::cmp::Ordering::Equal => Bound {
                v: self.lo.v,
                closed: self.lo.closed && other.lo.closed,
            },
        };
        let hi = match self.hi.v.cmp(&other.hi.v) {
            std::cmp::Ordering::Less => self.hi,
            std::cmp::Ordering::Greater => other.hi,
            std::cmp::Ordering::Equal => Bound {
                v: self.hi.v,
                closed: self.hi.closed && other.hi.closed,
            },
        };
        Iv { lo, hi }
    }

    /// Set containment, assuming `self` nonempty.
    fn subset_nonempty(&self, other: &Iv) -> bool {
        let lo_ok = match other.lo.v.cmp(&self.lo.v) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Equal => other.lo.closed || !self.lo.closed,
            std::cmp::Ordering::Greater => false,
        };
        let hi_ok = match other.hi.v.cmp(&self.hi.v) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Equal => other.hi.closed || !self.hi.closed,
            std::cmp::Ordering::Less => false,
        };
        lo_ok && hi_ok
    }

    fn shift(&self, d: Rational64) -> Iv {
        Iv {
            lo: self.lo.shift(d),
            hi: self.hi.shift(d),
        }
    }
}

/// `Rect(c, d) ∩ U`, kept normalized: `c` is trimmed above by `sup d` and
/// `d` below by `inf c`, so each stored interval is the exact projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Region {
    c: Iv,
    d: Iv,
    empty: bool,
}

impl Region {
    fn new(c: Iv, d: Iv) -> Region {
        // first trim c by d's upper end, then d by the trimmed c's lower end
        let c2 = c.intersect(&Iv::new(Bound::neg_inf(), d.hi));
        let d2 = d.intersect(&Iv::new(c.lo, Bound::pos_inf()));
        let empty = c2.is_empty() || d2.is_empty();
        Region {
            c: c2,
            d: d2,
            empty,
        }
    }

    fn is_empty(&self) -> bool {
        self.empty
    }

    fn intersect(&self, other: &Region) -> Region {
        if self.empty || other.empty {
            return EMPTY_REGION;
        }
        Region::new(self.c.intersect(&other.c), self.d.intersect(&other.d))
    }

    fn subset(&self, other: &Region) -> bool {
        if self.empty {
            return true;
        }
        if other.empty {
            return false;
        }
        self.c.subset_nonempty(&other.c) && self.d.subset_nonempty(&other.d)
    }

    /// Everything above some point of the region.
    fn up_closure(&self) -> Region {
        if self.empty {
            return EMPTY_REGION;
        }
        Region::new(
            Iv::new(Bound::neg_inf(), self.c.hi),
            Iv::new(self.d.lo, Bound::pos_inf()),
        )
    }

    /// Everything below some point of the region.
    fn down_closure(&self) -> Region {
        if self.empty {
            return EMPTY_REGION;
        }
        Region::new(
            Iv::new(self.c.lo, Bound::pos_inf()),
            Iv::new(Bound::neg_inf(), self.d.hi),
        )
    }

    /// Support of the epsilon-shifted module: `(x, y)` belongs iff
    /// `(x - eps, y + eps)` belongs to `self`.
    fn transform(&self, eps: Rational64) -> Region {
        if self.empty {
            return EMPTY_REGION;
        }
        Region::new(self.c.shift(eps), self.d.shift(-eps))
    }
}

const EMPTY_REGION: Region = Region {
    c: Iv {
        lo: Bound {
            v: XRat::PosInf,
            closed: false,
        },
        hi: Bound {
            v: XRat::NegInf,
            closed: false,
        },
    },
    d: Iv {
        lo: Bound {
            v: XRat::PosInf,
            closed: false,
        },
        hi: Bound {
            v: XRat::NegInf,
            closed: false,
        },
    },
    empty: true,
};

/// Whether a nonzero morphism of interval modules `k I -> k J` exists: the
/// overlap must be nonempty, up-closed within `J` and down-closed within
/// `I`. Any such morphism is then a scalar on the whole overlap.
fn hom_nonzero(i: &Region, j: &Region) -> bool {
    let overlap = i.intersect(j);
    if overlap.is_empty() {
        return false;
    }
    j.intersect(&overlap.up_closure()).subset(&overlap)
        && i.intersect(&overlap.down_closure()).subset(&overlap)
}

/// Decides whether the block modules on `x` and `y` are eps-interleaved.
///
/// With at most one-dimensional hom spaces the interleaving equations say:
/// either both 2eps self-maps vanish (then the zero morphisms interleave),
/// or both connecting morphisms exist and each composite restricts to the
/// full support of the corresponding 2eps self-map.
pub fn eps_interleaved(x: &Block, y: &Block, eps: Rational64) -> Result<bool, DistanceError> {
    if eps < Rational64::zero() {
        return Err(DistanceError::NegativeEps);
    }
    let i = x.region();
    let j = y.region();
    let two = eps + eps;
    let i2 = i.intersect(&i.transform(two));
    let j2 = j.intersect(&j.transform(two));
    if i2.is_empty() && j2.is_empty() {
        return Ok(true);
    }
    let ieps = i.transform(eps);
    let jeps = j.transform(eps);
    Ok(hom_nonzero(&i, &jeps) && hom_nonzero(&j, &ieps) && i2.subset(&jeps) && j2.subset(&ieps))
}

/// Threshold below which the block cannot be deleted: the least eps at
/// which the block module is eps-interleaved with the zero module. Blocks
/// closed on both ends never die.
pub fn block_deletion_cost(b: &Block) -> XRat {
    match b.kind {
        DecKind::ClosedClosed => XRat::PosInf,
        DecKind::ClosedOpen | DecKind::OpenClosed => b.width().div_int(2),
        DecKind::OpenOpen => b.width().div_int(4),
    }
}

/// Least eps at which two blocks of the same kind are eps-interleaved;
/// infinite for distinct kinds (matchings preserve type). Derived from the
/// predicate: endpoints must match within eps unless both blocks are
/// already deletable at eps.
pub fn block_pair_cost(x: &Block, y: &Block) -> XRat {
    if x.kind != y.kind {
        return XRat::PosInf;
    }
    let endpoint = XRat::abs_diff(&x.lo, &y.lo).max(XRat::abs_diff(&x.hi, &y.hi));
    let both_trivial = block_deletion_cost(x).max(block_deletion_cost(y));
    endpoint.min(both_trivial)
}

/// A Z-orbit of bars of the infinite periodic zigzag, stored as one block
/// representative; acting by `z` shifts both endpoints by `z * period`. The
/// bar of the full interval is the only non-periodic one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitBlock {
    pub rep: Block,
    pub period: i64,
    pub periodic: bool,
}

impl OrbitBlock {
    pub fn shifted(&self, z: i64) -> Block {
        if self.periodic {
            self.rep.shift(z * self.period)
        } else {
            self.rep
        }
    }
}

/// Orbit representatives of the infinite restriction of an arc code, one
/// entry per multiplicity unit, in canonical (arc-code) order.
pub fn orbit_blocks(ac: &ArcCode, poset: &BipathPoset) -> Vec<OrbitBlock> {
    let n = poset.n() as i64;
    let m = poset.m() as i64;
    let period = poset.period() as i64;
    let mut out = Vec::new();
    for (iv, &mult) in ac.iter() {
        let (rep, periodic) = match *iv {
            BipathInterval::Full => (Block::whole(), false),
            BipathInterval::Left { i, j: 0 } => {
                (Block::from_ints(DecKind::OpenOpen, 0, i as i64 + 1), true)
            }
            BipathInterval::Left { i, j } => (
                Block::from_ints(DecKind::OpenOpen, j as i64 - n - m, i as i64 + 1),
                true,
            ),
            BipathInterval::Right { i, j } => (
                Block::from_ints(DecKind::ClosedClosed, i as i64, j as i64),
                true,
            ),
            BipathInterval::Top { i, j } => (
                Block::from_ints(DecKind::ClosedOpen, i as i64, j as i64 + 1),
                true,
            ),
            BipathInterval::Bottom { i, j } => (
                Block::from_ints(DecKind::OpenClosed, i as i64 - 1, j as i64),
                true,
            ),
        };
        for _ in 0..mult {
            out.push(OrbitBlock {
                rep,
                period,
                periodic,
            });
        }
    }
    out
}

/// Shift window that provably contains the optimal alignment of two orbits:
/// beyond it the shifted supports are disjoint and the pair cost is bounded
/// below by the deletion costs.
pub fn shift_window(a: &OrbitBlock, b: &OrbitBlock) -> i64 {
    if !(a.periodic && b.periodic) {
        return 0;
    }
    let span = match (a.rep.width(), b.rep.width()) {
        (XRat::Fin(x), XRat::Fin(y)) => x.max(y),
        _ => return 0,
    };
    let n = Rational64::from_integer(a.period);
    let ratio = (span + n) / n;
    let ceil = ratio.ceil().to_integer();
    ceil + 1
}

/// Best alignment of two orbits: the shift minimizing the block pair cost.
/// The window is centered on the shift that best aligns the left endpoints,
/// so representatives need not come from a common fundamental domain.
pub fn pair_cost_and_shift(a: &OrbitBlock, b: &OrbitBlock) -> Result<(XRat, i64), DistanceError> {
    if a.periodic && b.periodic && a.period != b.period {
        return Err(DistanceError::PeriodMismatch(a.period, b.period));
    }
    let w = shift_window(a, b);
    let center = match (a.rep.lo.finite(), b.rep.lo.finite()) {
        (Some(x), Some(y)) if a.periodic && b.periodic => ((x - y)
            / Rational64::from_integer(a.period))
        .round()
        .to_integer(),
        _ => 0,
    };
    // visit shifts by distance from the center so ties report the most
    // aligned one
    let mut best = (XRat::PosInf, center);
    for d in 0..=w {
        for z in [center + d, center - d] {
            let cost = block_pair_cost(&a.rep, &b.shifted(z));
            if cost < best.0 {
                best = (cost, z);
            }
            if d == 0 {
                break;
            }
        }
    }
    Ok(best)
}

/// Min-over-shifts interleaving cost of two orbits; infinite across kinds.
pub fn pair_cost(a: &OrbitBlock, b: &OrbitBlock) -> Result<XRat, DistanceError> {
    Ok(pair_cost_and_shift(a, b)?.0)
}

pub fn deletion_cost(o: &OrbitBlock) -> XRat {
    block_deletion_cost(&o.rep)
}

/// An eps-matching between two orbit multisets: a partial bijection plus
/// deletions, every reported cost at most `epsilon`. Pair entries carry the
/// realizing shift `z` (orbit `a` matched with `z` acting on orbit `b`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingResult {
    pub epsilon: XRat,
    pub pairs: Vec<(usize, usize, i64)>,
    pub deleted_a: Vec<usize>,
    pub deleted_b: Vec<usize>,
}

/// Bottleneck distance between two arc codes over the same poset; by the
/// isometry theorem the same value is the interleaving distance.
pub fn bottleneck_distance(
    a: &ArcCode,
    b: &ArcCode,
    poset: &BipathPoset,
) -> Result<XRat, DistanceError> {
    Ok(bottleneck_matching(a, b, poset)?.0)
}

/// Bottleneck distance together with a realizing matching.
pub fn bottleneck_matching(
    a: &ArcCode,
    b: &ArcCode,
    poset: &BipathPoset,
) -> Result<(XRat, MatchingResult), DistanceError> {
    let oa = orbit_blocks(a, poset);
    let ob = orbit_blocks(b, poset);
    let na = oa.len();
    let nb = ob.len();

    let mut pair = vec![vec![(XRat::PosInf, 0i64); nb]; na];
    for (i, x) in oa.iter().enumerate() {
        for (j, y) in ob.iter().enumerate() {
            pair[i][j] = pair_cost_and_shift(x, y)?;
        }
    }
    let del_a: Vec<XRat> = oa.iter().map(deletion_cost).collect();
    let del_b: Vec<XRat> = ob.iter().map(deletion_cost).collect();

    let mut candidates: Vec<XRat> = vec![XRat::zero()];
    candidates.extend(
        pair.iter()
            .flatten()
            .map(|(c, _)| *c)
            .filter(XRat::is_finite),
    );
    candidates.extend(del_a.iter().copied().filter(XRat::is_finite));
    candidates.extend(del_b.iter().copied().filter(XRat::is_finite));
    candidates.sort();
    candidates.dedup();

    let feasible =
        |t: &XRat| -> Option<Vec<usize>> { max_matching(na, nb, &pair, &del_a, &del_b, t) };

    // least feasible candidate by binary search (feasibility is monotone)
    let mut lo = 0usize;
    let mut hi = candidates.len();
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(&candidates[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    if lo == candidates.len() {
        // no finite threshold works: distance is infinite, delete everything
        return Ok((
            XRat::PosInf,
            MatchingResult {
                epsilon: XRat::PosInf,
                pairs: Vec::new(),
                deleted_a: (0..na).collect(),
                deleted_b: (0..nb).collect(),
            },
        ));
    }
    let eps = candidates[lo];
    let assignment = feasible(&eps).expect("just verified feasible");
    let mut pairs = Vec::new();
    let mut deleted_a = Vec::new();
    let mut deleted_b = Vec::new();
    for (left, &right) in assignment.iter().enumerate() {
        if left < na {
            if right < nb {
                pairs.push((left, right, pair[left][right].1));
            } else {
                deleted_a.push(left);
            }
        } else if right < nb {
            deleted_b.push(right);
        }
    }
    Ok((
        eps,
        MatchingResult {
            epsilon: eps,
            pairs,
            deleted_a,
            deleted_b,
        },
    ))
}

/// Reference matcher for verification: exhaustively enumerates every
/// type-respecting partial bijection between the two orbit multisets, with
/// per-pair costs scanned over shifts in (a margin beyond) the bounded
/// window, and returns the minimax value. Exponential; keep inputs small.
pub fn exhaustive_bottleneck(
    a: &ArcCode,
    b: &ArcCode,
    poset: &BipathPoset,
) -> Result<XRat, DistanceError> {
    let oa = orbit_blocks(a, poset);
    let ob = orbit_blocks(b, poset);
    let na = oa.len();
    let nb = ob.len();
    let mut pair = vec![vec![XRat::PosInf; nb]; na];
    for (i, x) in oa.iter().enumerate() {
        for (j, y) in ob.iter().enumerate() {
            if x.periodic && y.periodic && x.period != y.period {
                return Err(DistanceError::PeriodMismatch(x.period, y.period));
            }
            let w = shift_window(x, y) + 3;
            let center = match (x.rep.lo.finite(), y.rep.lo.finite()) {
                (Some(p), Some(q)) if x.periodic && y.periodic => ((p - q)
                    / Rational64::from_integer(x.period))
                .round()
                .to_integer(),
                _ => 0,
            };
            for z in center - w..=center + w {
                pair[i][j] = pair[i][j].min(block_pair_cost(&x.rep, &y.shifted(z)));
            }
        }
    }
    let del_a: Vec<XRat> = oa.iter().map(deletion_cost).collect();
    let del_b: Vec<XRat> = ob.iter().map(deletion_cost).collect();

    fn explore(
        i: usize,
        used: &mut Vec<bool>,
        current: XRat,
        best: &mut XRat,
        pair: &[Vec<XRat>],
        del_a: &[XRat],
        del_b: &[XRat],
    ) {
        if current >= *best {
            return;
        }
        if i == pair.len() {
            let mut total = current;
            for (j, &u) in used.iter().enumerate() {
                if !u {
                    total = total.max(del_b[j]);
                }
            }
            *best = (*best).min(total);
            return;
        }
        explore(i + 1, used, current.max(del_a[i]), best, pair, del_a, del_b);
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                explore(
                    i + 1,
                    used,
                    current.max(pair[i][j]),
                    best,
                    pair,
                    del_a,
                    del_b,
                );
                used[j] = false;
            }
        }
    }

    let mut best = XRat::PosInf;
    let mut used = vec![false; nb];
    explore(0, &mut used, XRat::zero(), &mut best, &pair, &del_a, &del_b);
    // the empty matching with everything deleted is always allowed; at
    // infinite best that is the delete-all matching
    Ok(best)
}

/// Perfect-matching feasibility at threshold `t` on the dummy-augmented
/// bipartite graph:
/// left = real A + one dummy per B element,
/// right = real B + one dummy per A element.
/// A's dummy edge exists iff A's element is deletable at `t`, dummies match
/// each other freely. Returns, when every node is matched, the right
/// partner of each left node.
fn max_matching(
    na: usize,
    nb: usize,
    pair: &[Vec<(XRat, i64)>],
    del_a: &[XRat],
    del_b: &[XRat],
    t: &XRat,
) -> Option<Vec<usize>> {
    let left_n = na + nb;
    let right_n = nb + na;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); left_n];
    for i in 0..na {
        for j in 0..nb {
            if pair[i][j].0 <= *t {
                adj[i].push(j);
            }
        }
        if del_a[i] <= *t {
            adj[i].push(nb + i);
        }
    }
    for j in 0..nb {
        if del_b[j] <= *t {
            adj[na + j].push(j);
        }
        for i in 0..na {
            adj[na + j].push(nb + i);
        }
    }

    let mut match_right: Vec<Option<usize>> = vec![None; right_n];
    let mut match_left: Vec<Option<usize>> = vec![None; left_n];

    fn augment(
        u: usize,
        adj: &[Vec<usize>],
        match_right: &mut [Option<usize>],
        match_left: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if match_right[v].is_none()
                || augment(match_right[v].unwrap(), adj, match_right, match_left, seen)
            {
                match_right[v] = Some(u);
                match_left[u] = Some(v);
                return true;
            }
        }
        false
    }

    let mut size = 0;
    for u in 0..left_n {
        let mut seen = vec![false; right_n];
        if augment(u, &adj, &mut match_right, &mut match_left, &mut seen) {
            size += 1;
        }
    }
    if size == left_n {
        Some(match_left.into_iter().map(|v| v.unwrap()).collect())
    } else {
        None
    }
}
