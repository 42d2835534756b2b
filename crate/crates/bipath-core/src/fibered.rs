//! Two-parameter grid modules and their fibered invariants.
//!
//! A [`GridModule`] assigns a space to each point of a finite grid, a matrix
//! to each rightward and upward edge, with commuting unit squares. Pulling
//! back along an order-preserving embedding of a bipath poset gives a bipath
//! module (and hence an arc code); restricting along a monotone path of grid
//! points gives a one-parameter module (and hence a barcode). The fibered
//! arc code of a grid module is the assignment of arc codes to a family of
//! embeddings, and it strictly refines the fibered barcode: the `M_lambda`
//! example built here has equal line barcodes for `lambda = 1, -1` but
//! different arc codes at one five-vertex embedding.
//!
//! [`h0_bifiltration`] ingests a one-critical bifiltration of a graph and
//! produces the grid module of reduced 0-th homology, with induced maps
//! realized through component-merge bookkeeping.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::bipath::{BipathError, BipathModule, BipathPoset};
use crate::field::{FieldSpec, LinalgError, Matrix};
use crate::zigzag::{ZigzagRep, ZigzagShape, ZzBarcode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiberedError {
    #[error("invalid grid module: {0}")]
    BadShape(String),
    #[error("square at ({0}, {1}) does not commute")]
    NonCommutingSquare(usize, usize),
    #[error("embedding is not order-preserving: {0}")]
    NonMonotone(String),
    #[error("invalid path: {0}")]
    BadPath(String),
    #[error("invalid bifiltration: {0}")]
    BadBifiltration(String),
    #[error(transparent)]
    Bipath(#[from] BipathError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A persistence module on the grid `{0..rows} x {0..cols}`, ordered
/// coordinatewise; `hmaps` point rightward (`(r,c) -> (r,c+1)`) and `vmaps`
/// upward (`(r,c) -> (r+1,c)`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridModule {
    pub rows: usize,
    pub cols: usize,
    pub field: FieldSpec,
    dims: Vec<usize>,
    hmaps: Vec<Matrix>,
    vmaps: Vec<Matrix>,
}

impl GridModule {
    pub fn new(
        rows: usize,
        cols: usize,
        field: FieldSpec,
        dims: Vec<usize>,
        hmaps: Vec<Matrix>,
        vmaps: Vec<Matrix>,
    ) -> Result<Self, FiberedError> {
        if rows == 0 || cols == 0 {
            return Err(FiberedError::BadShape("empty grid".into()));
        }
        if dims.len() != rows * cols {
            return Err(FiberedError::BadShape("dims length".into()));
        }
        if hmaps.len() != rows * (cols - 1) || vmaps.len() != (rows - 1) * cols {
            return Err(FiberedError::BadShape("edge map count".into()));
        }
        let m = GridModule {
            rows,
            cols,
            field,
            dims,
            hmaps,
            vmaps,
        };
        for r in 0..rows {
            for c in 0..cols - 1 {
                let h = m.hmap(r, c);
                if h.rows() != m.dim(r, c + 1) || h.cols() != m.dim(r, c) {
                    return Err(FiberedError::BadShape(format!("hmap at ({r}, {c})")));
                }
            }
        }
        for r in 0..rows - 1 {
            for c in 0..cols {
                let v = m.vmap(r, c);
                if v.rows() != m.dim(r + 1, c) || v.cols() != m.dim(r, c) {
                    return Err(FiberedError::BadShape(format!("vmap at ({r}, {c})")));
                }
            }
        }
        Ok(m)
    }

    pub fn zero(rows: usize, cols: usize, field: FieldSpec) -> Self {
        let dims = vec![0; rows * cols];
        let hmaps = vec![Matrix::zeros(0, 0); rows * (cols - 1)];
        let vmaps = vec![Matrix::zeros(0, 0); (rows - 1) * cols];
        GridModule {
            rows,
            cols,
            field,
            dims,
            hmaps,
            vmaps,
        }
    }

    /// Indicator module of a rectangle, identity maps inside.
    pub fn rectangle(
        rows: usize,
        cols: usize,
        field: FieldSpec,
        r_range: (usize, usize),
        c_range: (usize, usize),
    ) -> Self {
        let inside = |r: usize, c: usize| {
            r >= r_range.0 && r <= r_range.1 && c >= c_range.0 && c <= c_range.1
        };
        let dims: Vec<usize> = (0..rows * cols)
            .map(|k| usize::from(inside(k / cols, k % cols)))
            .collect();
        let mut hmaps = Vec::new();
        for r in 0..rows {
            for c in 0..cols - 1 {
                hmaps.push(if inside(r, c) && inside(r, c + 1) {
                    Matrix::identity(1)
                } else {
                    Matrix::zeros(dims[r * cols + c + 1], dims[r * cols + c])
                });
            }
        }
        let mut vmaps = Vec::new();
        for r in 0..rows - 1 {
            for c in 0..cols {
                vmaps.push(if inside(r, c) && inside(r + 1, c) {
                    Matrix::identity(1)
                } else {
                    Matrix::zeros(dims[(r + 1) * cols + c], dims[r * cols + c])
                });
            }
        }
        GridModule {
            rows,
            cols,
            field,
            dims,
            hmaps,
            vmaps,
        }
    }

    pub fn direct_sum(&self, other: &GridModule) -> Result<GridModule, FiberedError> {
        if self.rows != other.rows || self.cols != other.cols || self.field != other.field {
            return Err(FiberedError::BadShape("direct sum shape mismatch".into()));
        }
        let dims: Vec<usize> = self
            .dims
            .iter()
            .zip(&other.dims)
            .map(|(a, b)| a + b)
            .collect();
        let block = |a: &Matrix, b: &Matrix| {
            let mut m = Matrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
            for r in 0..a.rows() {
                for c in 0..a.cols() {
                    m.set(r, c, a.get(r, c));
                }
            }
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    m.set(a.rows() + r, a.cols() + c, b.get(r, c));
                }
            }
            m
        };
        let hmaps = self
            .hmaps
            .iter()
            .zip(&other.hmaps)
            .map(|(a, b)| block(a, b))
            .collect();
        let vmaps = self
            .vmaps
            .iter()
            .zip(&other.vmaps)
            .map(|(a, b)| block(a, b))
            .collect();
        Ok(GridModule {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            dims,
            hmaps,
            vmaps,
        })
    }

    /// Reinterprets the module over another prime field, provided every
    /// entry is already canonical there.
    pub fn with_field(&self, field: FieldSpec) -> Result<GridModule, FiberedError> {
        if !self
            .hmaps
            .iter()
            .chain(&self.vmaps)
            .all(|m| m.entries_canonical(field))
        {
            return Err(FiberedError::BadShape(format!(
                "entries not reduced mod {}",
                field.modulus()
            )));
        }
        Ok(GridModule {
            field,
            ..self.clone()
        })
    }

    pub fn dim(&self, r: usize, c: usize) -> usize {
        self.dims[r * self.cols + c]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn hmap(&self, r: usize, c: usize) -> &Matrix {
        &self.hmaps[r * (self.cols - 1) + c]
    }

    pub fn vmap(&self, r: usize, c: usize) -> &Matrix {
        &self.vmaps[r * self.cols + c]
    }

    /// Checks that every unit square commutes, naming the offending square.
    pub fn validate(&self) -> Result<(), FiberedError> {
        for r in 0..self.rows - 1 {
            for c in 0..self.cols - 1 {
                let up_right = self.hmap(r + 1, c).mat_mul(self.vmap(r, c), self.field)?;
                let right_up = self.vmap(r, c + 1).mat_mul(self.hmap(r, c), self.field)?;
                if up_right != right_up {
                    return Err(FiberedError::NonCommutingSquare(r, c));
                }
            }
        }
        Ok(())
    }

    /// Composite along any staircase from `from` to `to` (well-defined by
    /// square commutativity; this one goes right first, then up).
    pub fn staircase(
        &self,
        from: (usize, usize),
        to: (usize, usize),
    ) -> Result<Matrix, FiberedError> {
        if to.0 < from.0 || to.1 < from.1 {
            return Err(FiberedError::NonMonotone(format!("{from:?} !<= {to:?}")));
        }
        let mut acc = Matrix::identity(self.dim(from.0, from.1));
        for c in from.1..to.1 {
            acc = self.hmap(from.0, c).mat_mul(&acc, self.field)?;
        }
        for r in from.0..to.0 {
            acc = self.vmap(r, to.1).mat_mul(&acc, self.field)?;
        }
        Ok(acc)
    }
}

/// An order-preserving map from a bipath poset into a grid, given by the
/// grid coordinate of every bipath vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipathEmbedding {
    pub poset: BipathPoset,
    pub targets: Vec<(usize, usize)>,
}

impl BipathEmbedding {
    pub fn new(poset: BipathPoset, targets: Vec<(usize, usize)>) -> Result<Self, FiberedError> {
        if targets.len() != poset.vertex_count() {
            return Err(FiberedError::NonMonotone("wrong number of targets".into()));
        }
        for (u, v) in poset.arrows() {
            let (a, b) = (targets[u], targets[v]);
            if a.0 > b.0 || a.1 > b.1 {
                return Err(FiberedError::NonMonotone(format!(
                    "arrow {u} -> {v} maps to {a:?} !<= {b:?}"
                )));
            }
        }
        Ok(BipathEmbedding { poset, targets })
    }

    pub fn in_bounds(&self, rows: usize, cols: usize) -> bool {
        self.targets.iter().all(|&(r, c)| r < rows && c < cols)
    }
}

/// The bipath module `M ∘ f`: spaces at the embedded grid points, arrows
/// given by staircase composites.
pub fn pullback(module: &GridModule, f: &BipathEmbedding) -> Result<BipathModule, FiberedError> {
    if !f.in_bounds(module.rows, module.cols) {
        return Err(FiberedError::NonMonotone(
            "embedding leaves the grid".into(),
        ));
    }
    let dims: Vec<usize> = f.targets.iter().map(|&(r, c)| module.dim(r, c)).collect();
    let arrows = f
        .poset
        .arrows()
        .iter()
        .map(|&(u, v)| module.staircase(f.targets[u], f.targets[v]))
        .collect::<Result<Vec<_>, _>>()?;
    let out = BipathModule {
        poset: f.poset,
        field: module.field,
        dims,
        arrows,
    };
    out.validate()?;
    Ok(out)
}

/// Arc code of the pullback along each embedding, in order.
pub fn fibered_arc_code(
    module: &GridModule,
    embeddings: &[BipathEmbedding],
) -> Result<Vec<crate::bipath::ArcCode>, FiberedError> {
    embeddings
        .iter()
        .map(|f| Ok(pullback(module, f)?.arc_code()?))
        .collect()
}

/// A coordinatewise non-decreasing sequence of distinct grid points; the
/// discrete stand-in for a non-negative-slope line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonePath {
    pub points: Vec<(usize, usize)>,
}

impl MonotonePath {
    pub fn new(points: Vec<(usize, usize)>) -> Result<Self, FiberedError> {
        if points.is_empty() {
            return Err(FiberedError::BadPath("empty path".into()));
        }
        for w in points.windows(2) {
            let (a, b) = (w[0], w[1]);
            if a == b || b.0 < a.0 || b.1 < a.1 {
                return Err(FiberedError::BadPath(format!(
                    "{a:?} -> {b:?} not increasing"
                )));
            }
        }
        Ok(MonotonePath { points })
    }
}

/// Barcode of the one-parameter restriction of the module along the path,
/// computed on an all-forward shape.
pub fn line_barcode(module: &GridModule, path: &MonotonePath) -> Result<ZzBarcode, FiberedError> {
    if !path
        .points
        .iter()
        .all(|&(r, c)| r < module.rows && c < module.cols)
    {
        return Err(FiberedError::BadPath("path leaves the grid".into()));
    }
    let shape = ZigzagShape::forward(path.points.len());
    let dims: Vec<usize> = path.points.iter().map(|&(r, c)| module.dim(r, c)).collect();
    let maps = path
        .points
        .windows(2)
        .map(|w| module.staircase(w[0], w[1]))
        .collect::<Result<Vec<_>, _>>()?;
    let rep = ZigzagRep {
        shape,
        field: module.field,
        dims,
        maps,
    };
    Ok(rep.barcode())
}

/// The 2 x 5 example module `M_lambda`. Its top row runs
/// `k -> k^2 -> k^2 -> k -> 0` and its bottom row `0 -> k -> k^2 -> k^2 -> k`,
/// with the two `(lambda, -1)` maps the only places `lambda` enters.
/// `lambda` must already be a canonical scalar of `field`.
pub fn build_example_mlambda(field: FieldSpec, lambda: u32) -> GridModule {
    assert!(lambda < field.modulus());
    let neg1 = field.neg(1);
    let col = |a: u32, b: u32| Matrix::from_rows(&[vec![a], vec![b]]).unwrap();
    let row = |a: u32, b: u32| Matrix::from_rows(&[vec![a, b]]).unwrap();
    // internal row 0 = bottom, row 1 = top; column k = displayed column k+1
    let dims = vec![
        0, 1, 2, 2, 1, // bottom row
        1, 2, 2, 1, 0, // top row
    ];
    let hmaps = vec![
        // bottom row: 0 -> k, [0 1]^T, id, (1, -1)
        Matrix::zeros(1, 0),
        col(0, 1),
        Matrix::identity(2),
        row(1, neg1),
        // top row: [1 0]^T, id, (lambda, -1), k -> 0
        col(1, 0),
        Matrix::identity(2),
        row(lambda, neg1),
        Matrix::zeros(0, 1),
    ];
    let vmaps = vec![
        // bottom -> top per column: 0 -> k, [0 1]^T, id, (lambda, -1), k -> 0
        Matrix::zeros(1, 0),
        col(0, 1),
        Matrix::identity(2),
        row(lambda, neg1),
        Matrix::zeros(0, 1),
    ];
    let m = GridModule::new(2, 5, field, dims, hmaps, vmaps).expect("shapes fixed");
    m.validate().expect("example commutes for every lambda");
    m
}

/// The five-vertex embedding used to tell `M_1` from `M_{-1}`: a bipath
/// with n = 3, m = 2 whose image is the pentagon
/// bottom-left, then the top row rightward, then the bottom-right corner.
pub fn example_embedding() -> BipathEmbedding {
    let poset = BipathPoset::new(3, 2).unwrap();
    BipathEmbedding::new(poset, vec![(0, 2), (1, 2), (1, 3), (1, 4), (0, 4)]).unwrap()
}

/// The three line restrictions on which `M_1` and `M_{-1}` agree.
pub fn example_lines() -> Vec<MonotonePath> {
    vec![
        // slope 0: the whole top row
        MonotonePath::new(vec![(1, 0), (1, 1), (1, 2), (1, 3), (1, 4)]).unwrap(),
        // slope 1 through (1,3) and (2,4) in displayed coordinates
        MonotonePath::new(vec![(0, 2), (1, 3)]).unwrap(),
        // slope 1/2 through (1,2) and (2,4)
        MonotonePath::new(vec![(0, 1), (1, 3)]).unwrap(),
    ]
}

/// Reduced 0-th homology of a one-critical graph bifiltration as a grid
/// module. Vertices and edges enter at their grades; at each grid point the
/// space has one basis vector `[C] - [C_root]` per non-root component, where
/// components are ordered by their smallest vertex and the root component is
/// the one containing the smallest present vertex.
pub fn h0_bifiltration(
    field: FieldSpec,
    rows: usize,
    cols: usize,
    vertex_grades: &[(usize, usize)],
    edges: &[(usize, usize, (usize, usize))],
) -> Result<GridModule, FiberedError> {
    if rows == 0 || cols == 0 {
        return Err(FiberedError::BadBifiltration("empty grid".into()));
    }
    for (v, &(r, c)) in vertex_grades.iter().enumerate() {
        if r >= rows || c >= cols {
            return Err(FiberedError::BadBifiltration(format!(
                "vertex {v} grade out of grid"
            )));
        }
    }
    for &(u, v, (r, c)) in edges {
        if u >= vertex_grades.len() || v >= vertex_grades.len() {
            return Err(FiberedError::BadBifiltration(format!(
                "edge ({u}, {v}) references absent vertex"
            )));
        }
        if r >= rows || c >= cols {
            return Err(FiberedError::BadBifiltration(format!(
                "edge ({u}, {v}) grade out of grid"
            )));
        }
        for w in [u, v] {
            let g = vertex_grades[w];
            if r < g.0 || c < g.1 {
                return Err(FiberedError::BadBifiltration(format!(
                    "edge ({u}, {v}) enters at ({r}, {c}) before its vertex {w} at {g:?}"
                )));
            }
        }
    }

    // Components at each grid point, via union-find over present cells.
    struct PointData {
        /// component index of each present vertex
        comp_of: BTreeMap<usize, usize>,
        /// component representatives (smallest vertex), sorted; index 0 is
        /// the root when nonempty
        reps: Vec<usize>,
    }
    let point_data = |r: usize, c: usize| -> PointData {
        let present: Vec<usize> = (0..vertex_grades.len())
            .filter(|&v| vertex_grades[v].0 <= r && vertex_grades[v].1 <= c)
            .collect();
        let mut parent: BTreeMap<usize, usize> = present.iter().map(|&v| (v, v)).collect();
        fn find(parent: &mut BTreeMap<usize, usize>, v: usize) -> usize {
            let p = parent[&v];
            if p == v {
                v
            } else {
                let r = find(parent, p);
                parent.insert(v, r);
                r
            }
        }
        for &(u, v, (er, ec)) in edges {
            if er <= r && ec <= c {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                if ru != rv {
                    // union by smaller representative so find() lands on the
                    // component's minimal vertex
                    let (lo, hi) = (ru.min(rv), ru.max(rv));
                    parent.insert(hi, lo);
                }
            }
        }
        let mut comp_of = BTreeMap::new();
        let mut reps = Vec::new();
        for &v in &present {
            let root = find(&mut parent, v);
            let idx = match reps.iter().position(|&x| x == root) {
                Some(i) => i,
                None => {
                    reps.push(root);
                    reps.len() - 1
                }
            };
            comp_of.insert(v, idx);
        }
        // present is ascending, so reps come out sorted by smallest vertex
        debug_assert!(reps.windows(2).all(|w| w[0] < w[1]));
        PointData { comp_of, reps }
    };

    let data: Vec<PointData> = (0..rows * cols)
        .map(|k| point_data(k / cols, k % cols))
        .collect();
    let dims: Vec<usize> = data
        .iter()
        .map(|d| d.reps.len().saturating_sub(1))
        .collect();

    // Basis vector of component i (1-indexed among non-roots) is
    // [C_i] - [C_0]; its image at a later point is the difference of the
    // classes of the two target components.
    let induced = |from: &PointData, to: &PointData| -> Matrix {
        let dfrom = from.reps.len().saturating_sub(1);
        let dto = to.reps.len().saturating_sub(1);
        let mut m = Matrix::zeros(dto, dfrom);
        if dfrom == 0 {
            return m;
        }
        let root_to = to.comp_of[&from.reps[0]];
        for i in 1..from.reps.len() {
            let ci = to.comp_of[&from.reps[i]];
            if ci > 0 {
                m.set(ci - 1, i - 1, field.add(m.get(ci - 1, i - 1), 1));
            }
            if root_to > 0 {
                m.set(root_to - 1, i - 1, field.sub(m.get(root_to - 1, i - 1), 1));
            }
        }
        m
    };

    let mut hmaps = Vec::new();
    for r in 0..rows {
        for c in 0..cols - 1 {
            hmaps.push(induced(&data[r * cols + c], &data[r * cols + c + 1]));
        }
    }
    let mut vmaps = Vec::new();
    for r in 0..rows - 1 {
        for c in 0..cols {
            vmaps.push(induced(&data[r * cols + c], &data[(r + 1) * cols + c]));
        }
    }
    let module = GridModule::new(rows, cols, field, dims, hmaps, vmaps)?;
    module.validate()?;
    Ok(module)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipath::{ArcCode, BipathInterval};
    use crate::zigzag::ZzInterval;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u32) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    #[test]
    fn validate_identity_grid() {
        let m = GridModule::rectangle(3, 4, gf(2), (0, 2), (0, 3));
        m.validate().unwrap();
    }

    #[test]
    fn validate_names_bad_square() {
        let f = gf(2);
        // 2x2 grid, all spaces k; three identities and one zero map
        let dims = vec![1, 1, 1, 1];
        let hmaps = vec![Matrix::identity(1), Matrix::identity(1)];
        let vmaps = vec![Matrix::zeros(1, 1), Matrix::identity(1)];
        let m = GridModule::new(2, 2, f, dims, hmaps, vmaps).unwrap();
        assert_eq!(m.validate(), Err(FiberedError::NonCommutingSquare(0, 0)));
    }

    #[test]
    fn mlambda_builds_and_validates() {
        let f5 = gf(5);
        for lambda in [1u32, 4] {
            let m = build_example_mlambda(f5, lambda);
            m.validate().unwrap();
            assert_eq!(m.dim(1, 1), 2);
            assert_eq!(m.dims(), &[0, 1, 2, 2, 1, 1, 2, 2, 1, 0]);
        }
        // the two builds differ exactly in the two (lambda, -1) maps
        let a = build_example_mlambda(f5, 1);
        let b = build_example_mlambda(f5, 4);
        assert_eq!(a.hmap(0, 3), b.hmap(0, 3));
        assert_ne!(a.hmap(1, 2), b.hmap(1, 2));
        assert_ne!(a.vmap(0, 3), b.vmap(0, 3));
    }

    #[test]
    fn pullback_identity_cases() {
        let f2 = gf(2);
        let m = GridModule::rectangle(2, 3, f2, (0, 1), (0, 2));
        let poset = BipathPoset::new(2, 2).unwrap();
        let f = BipathEmbedding::new(poset, vec![(0, 0), (0, 1), (1, 2), (1, 0)]).unwrap();
        let pb = pullback(&m, &f).unwrap();
        pb.validate().unwrap();
        assert!(pb.dims.iter().all(|&d| d == 1));
        assert!(pb.arrows.iter().all(|a| *a == Matrix::identity(1)));

        // constant embedding: everything lands on one point
        let g = BipathEmbedding::new(poset, vec![(1, 1); 4]).unwrap();
        let pb = pullback(&m, &g).unwrap();
        assert!(pb.arrows.iter().all(|a| *a == Matrix::identity(1)));
    }

    #[test]
    fn pullback_rejects_non_monotone() {
        let poset = BipathPoset::new(2, 2).unwrap();
        assert!(matches!(
            BipathEmbedding::new(poset, vec![(1, 1), (0, 1), (1, 2), (1, 1)]),
            Err(FiberedError::NonMonotone(_))
        ));
    }

    #[test]
    fn example_arc_codes_distinguish_lambdas() {
        let f5 = gf(5);
        let f = example_embedding();
        let m1 = build_example_mlambda(f5, 1);
        let m_neg1 = build_example_mlambda(f5, 4);
        let ac1 = fibered_arc_code(&m1, std::slice::from_ref(&f))
            .unwrap()
            .remove(0);
        let ac2 = fibered_arc_code(&m_neg1, &[f]).unwrap().remove(0);
        let expect1: ArcCode = [
            (BipathInterval::Left { i: 2, j: 4 }, 1),
            (BipathInterval::Left { i: 1, j: 0 }, 1),
        ]
        .into_iter()
        .collect();
        let expect2: ArcCode = [
            (BipathInterval::Left { i: 1, j: 4 }, 1),
            (BipathInterval::Left { i: 2, j: 0 }, 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(ac1, expect1);
        assert_eq!(ac2, expect2);
        assert_ne!(ac1, ac2);
    }

    #[test]
    fn example_line_barcodes_agree() {
        let f5 = gf(5);
        let m1 = build_example_mlambda(f5, 1);
        let m_neg1 = build_example_mlambda(f5, 4);
        let lines = example_lines();
        let expected = [
            // slope 0: bars over path indices
            vec![(ZzInterval::new(0, 3), 1), (ZzInterval::new(1, 2), 1)],
            // slope 1
            vec![(ZzInterval::new(0, 1), 1), (ZzInterval::new(0, 0), 1)],
            // slope 1/2
            vec![(ZzInterval::new(0, 1), 1)],
        ];
        for (line, exp) in lines.iter().zip(expected) {
            let b1 = line_barcode(&m1, line).unwrap();
            let b2 = line_barcode(&m_neg1, line).unwrap();
            assert_eq!(b1, b2);
            let exp: ZzBarcode = exp.into_iter().collect();
            assert_eq!(b1, exp);
        }
    }

    #[test]
    fn single_point_path() {
        let f5 = gf(5);
        let m = build_example_mlambda(f5, 1);
        let path = MonotonePath::new(vec![(1, 1)]).unwrap();
        let bc = line_barcode(&m, &path).unwrap();
        assert_eq!(bc.multiplicity(&ZzInterval::new(0, 0)), 2);
        assert_eq!(bc.total(), 2);
    }

    #[test]
    fn one_row_line_barcode_matches_composite_rank_oracle() {
        // For an all-forward chain the rank of every composite map is an
        // independent route to the barcode.
        let f5 = gf(5);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let cols = 6;
            let mut grid = GridModule::zero(1, cols, f5);
            for _ in 0..rng.random_range(1..6) {
                let c0 = rng.random_range(0..cols);
                let c1 = rng.random_range(c0..cols);
                grid = grid
                    .direct_sum(&GridModule::rectangle(1, cols, f5, (0, 0), (c0, c1)))
                    .unwrap();
            }
            let path = MonotonePath::new((0..cols).map(|c| (0usize, c)).collect()).unwrap();
            let bc = line_barcode(&grid, &path).unwrap();
            // composite-rank inclusion–exclusion oracle
            let rank = |i: usize, j: usize| -> i64 {
                grid.staircase((0, i), (0, j)).unwrap().rank(f5) as i64
            };
            for i in 0..cols {
                for j in i..cols {
                    let mut mu = rank(i, j);
                    if i > 0 {
                        mu -= rank(i - 1, j);
                    }
                    if j + 1 < cols {
                        mu -= rank(i, j + 1);
                    }
                    if i > 0 && j + 1 < cols {
                        mu += rank(i - 1, j + 1);
                    }
                    assert_eq!(
                        bc.multiplicity(&ZzInterval::new(i, j)) as i64,
                        mu,
                        "bar [{i}, {j}]"
                    );
                }
            }
        }
    }

    #[test]
    fn pullback_supports_functorial() {
        let f2 = gf(2);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let (rows, cols) = (3, 4);
            let mut grid = GridModule::zero(rows, cols, f2);
            for _ in 0..rng.random_range(1..5) {
                let r0 = rng.random_range(0..rows);
                let r1 = rng.random_range(r0..rows);
                let c0 = rng.random_range(0..cols);
                let c1 = rng.random_range(c0..cols);
                grid = grid
                    .direct_sum(&GridModule::rectangle(rows, cols, f2, (r0, r1), (c0, c1)))
                    .unwrap();
            }
            let poset = BipathPoset::new(2, 2).unwrap();
            let f = BipathEmbedding::new(
                poset,
                vec![
                    (0, 0),
                    (rng.random_range(0..rows), rng.random_range(0..cols).max(1)),
                    (2, 3),
                    (rng.random_range(0..rows), 3),
                ],
            );
            let Ok(f) = f else { continue };
            let Ok(pb) = pullback(&grid, &f) else {
                continue;
            };
            let ac = pb.arc_code().unwrap();
            for (iv, _) in ac.iter() {
                for v in iv.support(&poset) {
                    let (r, c) = f.targets[v];
                    assert!(grid.dim(r, c) > 0, "arc interval sticks out of the support");
                }
            }
        }
    }

    #[test]
    fn h0_single_point_everywhere_is_zero() {
        let f2 = gf(2);
        let m = h0_bifiltration(f2, 3, 3, &[(0, 0)], &[]).unwrap();
        assert!(m.dims().iter().all(|&d| d == 0));
    }

    #[test]
    fn h0_three_points_no_edges() {
        let f2 = gf(2);
        let m = h0_bifiltration(f2, 2, 2, &[(0, 0), (0, 0), (0, 0)], &[]).unwrap();
        assert!(m.dims().iter().all(|&d| d == 2));
        m.validate().unwrap();
    }

    #[test]
    fn h0_merges_drop_dimension() {
        let f2 = gf(2);
        // three points born at the origin; edges arrive along the axes
        let m = h0_bifiltration(
            f2,
            3,
            3,
            &[(0, 0), (0, 0), (0, 0)],
            &[(0, 1, (0, 1)), (1, 2, (1, 0)), (0, 2, (2, 2))],
        )
        .unwrap();
        m.validate().unwrap();
        assert_eq!(m.dim(0, 0), 2);
        assert_eq!(m.dim(0, 1), 1); // 0-1 merged
        assert_eq!(m.dim(1, 0), 1); // 1-2 merged
        assert_eq!(m.dim(1, 1), 0);
        assert_eq!(m.dim(2, 2), 0);
    }

    #[test]
    fn h0_dims_match_bfs_component_count() {
        let f2 = gf(2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let (rows, cols) = (3, 4);
            let nv = rng.random_range(1..6);
            let grades: Vec<(usize, usize)> = (0..nv)
                .map(|_| (rng.random_range(0..rows), rng.random_range(0..cols)))
                .collect();
            let mut edges = Vec::new();
            for u in 0..nv {
                for v in u + 1..nv {
                    if rng.random_range(0..3) == 0 {
                        let g = (
                            grades[u].0.max(grades[v].0).max(rng.random_range(0..rows)),
                            grades[u].1.max(grades[v].1).max(rng.random_range(0..cols)),
                        );
                        edges.push((u, v, g));
                    }
                }
            }
            let m = h0_bifiltration(f2, rows, cols, &grades, &edges).unwrap();
            m.validate().unwrap();
            for r in 0..rows {
                for c in 0..cols {
                    // independent BFS count
                    let present: Vec<usize> = (0..nv)
                        .filter(|&v| grades[v].0 <= r && grades[v].1 <= c)
                        .collect();
                    let mut seen = vec![false; nv];
                    let mut comps = 0;
                    for &s in &present {
                        if seen[s] {
                            continue;
                        }
                        comps += 1;
                        let mut stack = vec![s];
                        seen[s] = true;
                        while let Some(u) = stack.pop() {
                            for &(a, b, (er, ec)) in &edges {
                                if er <= r && ec <= c {
                                    for (x, y) in [(a, b), (b, a)] {
                                        if x == u && !seen[y] {
                                            seen[y] = true;
                                            stack.push(y);
                                        }
                                    }
                                }
                            }
                        }
                    }
                    let expect = if comps == 0 { 0 } else { comps - 1 };
                    assert_eq!(m.dim(r, c), expect, "dims at ({r}, {c})");
                }
            }
        }
    }

    #[test]
    fn h0_map_when_root_component_changes() {
        // vertices 1 and 2 are present first (root: component of 1); vertex
        // 0 appears one step right and takes over as root. The class
        // [2]-[1] must map to [2]-[0] minus [1]-[0].
        let f5 = gf(5);
        let m = h0_bifiltration(f5, 1, 2, &[(0, 1), (0, 0), (0, 0)], &[]).unwrap();
        assert_eq!(m.dim(0, 0), 1);
        assert_eq!(m.dim(0, 1), 2);
        let expect = Matrix::from_rows(&[vec![4], vec![1]]).unwrap();
        assert_eq!(*m.hmap(0, 0), expect);
        // same over GF(2), where the signs collapse
        let m2 = h0_bifiltration(gf(2), 1, 2, &[(0, 1), (0, 0), (0, 0)], &[]).unwrap();
        assert_eq!(
            *m2.hmap(0, 0),
            Matrix::from_rows(&[vec![1], vec![1]]).unwrap()
        );
    }

    #[test]
    fn h0_rejects_bad_edges() {
        let f2 = gf(2);
        assert!(matches!(
            h0_bifiltration(f2, 2, 2, &[(0, 0)], &[(0, 3, (1, 1))]),
            Err(FiberedError::BadBifiltration(_))
        ));
        assert!(matches!(
            h0_bifiltration(f2, 2, 2, &[(1, 1), (0, 0)], &[(0, 1, (0, 0))]),
            Err(FiberedError::BadBifiltration(_))
        ));
    }
}
