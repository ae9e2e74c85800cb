//! Regular simplex, the affine maps `F_i` and the points and cells of the
//! level-m approximations of their attractor.

use std::collections::HashMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::perm::{Letter, Word};

/// Default bound on the number of m-cells `kᵐ`.
pub const DEFAULT_CELL_BOUND: usize = 2_000_000;

/// Regular k-simplex with unit edges in `R^{k−1}`, centered at the origin,
/// together with the centroids `q_i` of the facets opposite each vertex.
#[derive(Debug, Clone)]
pub struct SimplexGeometry {
    pub k: usize,
    pub p: Vec<DVector<f64>>,
    pub q: Vec<DVector<f64>>,
}

/// Vertices `e_i / √2` of the standard simplex, written in an orthonormal
/// (Helmert) basis of the hyperplane of coordinate-sum zero.
pub fn build_simplex(k: usize) -> Result<SimplexGeometry> {
    if k < 3 {
        return Err(Error::Precondition(format!("need k >= 3, got {k}")));
    }
    let d = k - 1;
    let mut basis = DMatrix::<f64>::zeros(d, k);
    for j in 1..k {
        let norm = ((j * (j + 1)) as f64).sqrt();
        for c in 0..j {
            basis[(j - 1, c)] = 1.0 / norm;
        }
        basis[(j - 1, j)] = -(j as f64) / norm;
    }
    let p: Vec<DVector<f64>> = (0..k)
        .map(|i| basis.column(i).into_owned() / std::f64::consts::SQRT_2)
        .collect();
    let total: DVector<f64> = p.iter().fold(DVector::zeros(d), |acc, x| acc + x);
    let q = (0..k).map(|i| (&total - &p[i]) / (k - 1) as f64).collect();
    Ok(SimplexGeometry { k, p, q })
}

/// `x ↦ A x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
}

impl AffineMap {
    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.a * x + &self.b
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            a: &self.a * &other.a,
            b: &self.a * &other.b + &self.b,
        }
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.a.clone().singular_values().iter().copied().collect();
        s.sort_by(|x, y| y.total_cmp(x));
        s
    }

    pub fn operator_norm(&self) -> f64 {
        self.singular_values()[0]
    }

    /// The unique affine map sending `from[j]` to `to[j]` for affinely
    /// independent points `from`.
    pub fn through_points(from: &[DVector<f64>], to: &[DVector<f64>]) -> Result<AffineMap> {
        let d = from[0].len();
        if from.len() != d + 1 || to.len() != d + 1 {
            return Err(Error::Precondition("need d + 1 point pairs".into()));
        }
        let mut p = DMatrix::<f64>::zeros(d, d);
        let mut y = DMatrix::<f64>::zeros(d, d);
        for j in 1..=d {
            p.set_column(j - 1, &(&from[j] - &from[0]));
            y.set_column(j - 1, &(&to[j] - &to[0]));
        }
        let p_inv = p
            .try_inverse()
            .ok_or_else(|| Error::Numerical("singular constraint system".into()))?;
        let a = y * p_inv;
        let b = &to[0] - &a * &from[0];
        Ok(AffineMap { a, b })
    }
}

/// The maps `F_i` with `F_i(p_i) = p_i` and `F_i(p_j) = q_j` for `j ≠ i`.
#[derive(Debug, Clone)]
pub struct AffineIfs {
    pub geometry: SimplexGeometry,
    pub maps: Vec<AffineMap>,
}

pub fn build_ifs(geometry: &SimplexGeometry) -> Result<AffineIfs> {
    let k = geometry.k;
    let mut maps = Vec::with_capacity(k);
    for i in 0..k {
        let images: Vec<DVector<f64>> = (0..k)
            .map(|j| {
                if i == j {
                    geometry.p[j].clone()
                } else {
                    geometry.q[j].clone()
                }
            })
            .collect();
        let f = AffineMap::through_points(&geometry.p, &images)?;
        for (j, (p, image)) in geometry.p.iter().zip(&images).enumerate() {
            if (f.apply(p) - image).amax() > 1e-12 {
                return Err(Error::Numerical(format!(
                    "F_{i} misses its constraint at p_{j}"
                )));
            }
        }
        if f.operator_norm() >= 1.0 {
            return Err(Error::Numerical(format!("F_{i} is not contractive")));
        }
        maps.push(f);
    }
    Ok(AffineIfs {
        geometry: geometry.clone(),
        maps,
    })
}

/// Address of a point of `V_m`: the left-infinite sequence
/// `…t t t d_1 d_2 … d_n` with constant tail `t`. The point `F_w(p_t)` for
/// `w = x_m … x_1` has digits `x_1 … x_m`.
///
/// Canonical form: leading digits equal to the tail are dropped, and when
/// digits remain the first one is replaced by the least letter different
/// from the tail, since `…lll i v` and `…lll j v` name the same point for
/// distinct `i, j, l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Address {
    pub tail: Letter,
    pub digits: Vec<Letter>,
}

impl Address {
    pub fn new(tail: Letter, digits: Vec<Letter>) -> Self {
        Address { tail, digits }.canonical()
    }

    pub fn canonical(mut self) -> Self {
        let skip = self.digits.iter().take_while(|&&d| d == self.tail).count();
        self.digits.drain(..skip);
        if let Some(first) = self.digits.first_mut() {
            *first = if self.tail == 0 { 1 } else { 0 };
        }
        self
    }

    /// Whether this is a vertex `p_t` of `V_0`.
    pub fn is_boundary(&self) -> bool {
        self.digits.is_empty()
    }

    /// The address after applying `F_x`.
    pub fn push(&self, x: Letter) -> Address {
        let mut digits = self.digits.clone();
        digits.push(x);
        Address::new(self.tail, digits)
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "...{t}{t}{t}", t = self.tail)?;
        if !self.digits.is_empty() {
            f.write_str(" ")?;
            f.write_str(&Word(self.digits.clone()).to_string())?;
        }
        Ok(())
    }
}

/// An m-cell `F_w(V_0)`: its word `w = x_m … x_1` and the indices in `V_m`
/// of its corners `F_w(p_0), …, F_w(p_{k−1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub word: Vec<Letter>,
    pub corners: Vec<usize>,
}

/// Combinatorial level-m structure: the points of `V_m` by address (the
/// vertices `p_i` first, in order) and the m-cells in lexicographic order
/// of their words.
#[derive(Debug, Clone)]
pub struct LevelCells {
    pub k: usize,
    pub m: usize,
    pub points: Vec<Address>,
    pub cells: Vec<Cell>,
}

pub fn level_cells(k: usize, m: usize, bound: usize) -> Result<LevelCells> {
    check_cell_bound(k, m, bound)?;
    let mut index: HashMap<Address, usize> = HashMap::new();
    let mut points = Vec::new();
    for t in 0..k as Letter {
        let a = Address::new(t, Vec::new());
        index.insert(a.clone(), points.len());
        points.push(a);
    }
    // corner addresses of every cell, built outermost letter first
    let mut cells: Vec<(Vec<Letter>, Vec<Address>)> = vec![(Vec::new(), points.clone())];
    for _ in 0..m {
        let mut next = Vec::with_capacity(cells.len() * k);
        for x in 0..k as Letter {
            for (word, corners) in &cells {
                let mut w = vec![x];
                w.extend_from_slice(word);
                next.push((w, corners.iter().map(|a| a.push(x)).collect()));
            }
        }
        cells = next;
    }
    let cells = cells
        .into_iter()
        .map(|(word, corners)| {
            let corners = corners
                .into_iter()
                .map(|a| {
                    let len = index.len();
                    *index.entry(a.clone()).or_insert_with(|| {
                        points.push(a);
                        len
                    })
                })
                .collect();
            Cell { word, corners }
        })
        .collect();
    Ok(LevelCells {
        k,
        m,
        points,
        cells,
    })
}

fn check_cell_bound(k: usize, m: usize, bound: usize) -> Result<()> {
    let count = (k as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if count > bound as u128 {
        return Err(Error::SizeBound {
            needed: usize::try_from(count).unwrap_or(usize::MAX),
            bound,
        });
    }
    Ok(())
}

/// Points of `V_m` with coordinates, plus the m-cells.
#[derive(Debug, Clone)]
pub struct AttractorPoints {
    pub level: LevelCells,
    pub coords: Vec<DVector<f64>>,
}

impl AttractorPoints {
    /// CSV with header `address,x0,x1,..`.
    pub fn to_csv(&self) -> String {
        let d = self.coords.first().map_or(0, |c| c.len());
        let mut out = String::from("address");
        for i in 0..d {
            out.push_str(&format!(",x{i}"));
        }
        out.push('\n');
        for (a, c) in self.level.points.iter().zip(&self.coords) {
            out.push_str(&a.to_string());
            for v in c.iter() {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Computes `V_m` and its cells by applying the maps, and checks that
/// every address of a point maps to the same coordinates within `1e−9`.
pub fn attractor_points(ifs: &AffineIfs, m: usize, bound: usize) -> Result<AttractorPoints> {
    let k = ifs.geometry.k;
    let level = level_cells(k, m, bound)?;
    let mut coords: Vec<Option<DVector<f64>>> = vec![None; level.points.len()];
    // F_w for every cell, built in the same order as level_cells
    let identity = AffineMap {
        a: DMatrix::identity(k - 1, k - 1),
        b: DVector::zeros(k - 1),
    };
    let mut maps = vec![identity];
    for _ in 0..m {
        let mut next = Vec::with_capacity(maps.len() * k);
        for x in 0..k {
            for f in &maps {
                next.push(ifs.maps[x].after(f));
            }
        }
        maps = next;
    }
    for (cell, f) in level.cells.iter().zip(&maps) {
        for (t, &idx) in cell.corners.iter().enumerate() {
            let x = f.apply(&ifs.geometry.p[t]);
            match &coords[idx] {
                Some(prev) => {
                    if (prev - &x).amax() > 1e-9 {
                        return Err(Error::Numerical(format!(
                            "address {} maps to two different points",
                            level.points[idx]
                        )));
                    }
                }
                None => coords[idx] = Some(x),
            }
        }
    }
    let coords = coords
        .into_iter()
        .map(|c| c.expect("every point is a cell corner"))
        .collect();
    Ok(AttractorPoints { level, coords })
}

/// Outcome of the cell-intersection check.
#[derive(Debug, Clone)]
pub struct IntersectionReport {
    /// For each pair `i < j`, the letters `l` with `q_l` in the
    /// intersection of `F_i(V_{m−1})` and `F_j(V_{m−1})`, plus the number of
    /// intersection points that are not any `q_l`.
    pub pairs: Vec<(Letter, Letter, Vec<Letter>, usize)>,
    /// Critical addresses `…lll i` as `(l, i)`.
    pub critical: Vec<(Letter, Letter)>,
    /// Tails `l` of the post-critical addresses `…ll`.
    pub post_critical: Vec<Letter>,
    pub ok: bool,
}

/// Intersects the images `F_i(V_{m−1})` pairwise by coordinates and checks
/// that `F_i ∩ F_j = {q_l : l ≠ i, j}`; derives the critical and
/// post-critical addresses from the intersection points.
pub fn verify_cell_intersections(ifs: &AffineIfs, m: usize) -> Result<IntersectionReport> {
    if m == 0 {
        return Err(Error::Precondition("level must be at least 1".into()));
    }
    let k = ifs.geometry.k;
    let pts = attractor_points(ifs, m - 1, DEFAULT_CELL_BOUND)?;
    let images: Vec<Vec<DVector<f64>>> = (0..k)
        .map(|i| pts.coords.iter().map(|x| ifs.maps[i].apply(x)).collect())
        .collect();
    let mut pairs = Vec::new();
    let mut ok = true;
    let mut critical = std::collections::BTreeSet::new();
    for i in 0..k {
        for j in i + 1..k {
            let mut common = Vec::new();
            for x in &images[i] {
                if images[j].iter().any(|y| (x - y).amax() < 1e-9)
                    && !common.iter().any(|c: &DVector<f64>| (c - x).amax() < 1e-9)
                {
                    common.push(x.clone());
                }
            }
            let mut found = Vec::new();
            let mut stray = 0;
            for x in &common {
                match (0..k).find(|&l| (x - &ifs.geometry.q[l]).amax() < 1e-9) {
                    Some(l) => found.push(l as Letter),
                    None => stray += 1,
                }
            }
            found.sort_unstable();
            let expected: Vec<Letter> = (0..k as Letter)
                .filter(|&l| l as usize != i && l as usize != j)
                .collect();
            ok &= found == expected && stray == 0;
            for &l in &found {
                // q_l = F_i(p_l) = F_j(p_l): addresses …lll i and …lll j
                critical.insert((l, i as Letter));
                critical.insert((l, j as Letter));
            }
            pairs.push((i as Letter, j as Letter, found, stray));
        }
    }
    // shifting …lll i once leaves …lll
    let post_critical: std::collections::BTreeSet<Letter> =
        critical.iter().map(|&(l, _)| l).collect();
    ok &= post_critical.len() == k;
    Ok(IntersectionReport {
        pairs,
        critical: critical.into_iter().collect(),
        post_critical: post_critical.into_iter().collect(),
        ok,
    })
}

/// Barycentric coordinates of `x` with respect to the simplex vertices.
pub fn barycentric(geometry: &SimplexGeometry, x: &DVector<f64>) -> Result<Vec<f64>> {
    let k = geometry.k;
    let mut m = DMatrix::<f64>::zeros(k, k);
    for (j, p) in geometry.p.iter().enumerate() {
        for r in 0..k - 1 {
            m[(r, j)] = p[r];
        }
        m[(k - 1, j)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(k);
    for r in 0..k - 1 {
        rhs[r] = x[r];
    }
    rhs[k - 1] = 1.0;
    let sol = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("degenerate simplex".into()))?;
    Ok(sol.iter().copied().collect())
}
