//! Energy forms on the level-m graphs, the renormalization factor and
//! effective resistance.

use nalgebra::{DMatrix, DVector};
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::fractal::geometry::{level_cells, Address, LevelCells, DEFAULT_CELL_BOUND};

pub type Rational = Ratio<i128>;

/// `D` with diagonal `−(k−1)` and off-diagonal `1`, so that
/// `−E_0(u) = uᵀ D u` for unit conductances.
pub fn boundary_form(k: usize) -> DMatrix<f64> {
    DMatrix::from_fn(k, k, |i, j| if i == j { -((k - 1) as f64) } else { 1.0 })
}

/// Renormalization factor `r = k(k−2)/(k²−k−1)` as an exact fraction.
pub fn renormalization_factor(k: usize) -> Rational {
    let k = k as i128;
    Ratio::new(k * (k - 2), k * k - k - 1)
}

/// The harmonic structure `(D, r)` with unit conductances.
///
/// With every `r_i = 1` the level-1 trace `T − JᵀX⁻¹J` equals `r·D`, i.e.
/// `D = λ_raw (T − JᵀX⁻¹J)` with `λ_raw = 1/r = (k²−k−1)/(k(k−2))`. After
/// rescaling the factors to `r` the same identity holds with `λ = 1`.
#[derive(Debug, Clone)]
pub struct HarmonicStructure {
    pub k: usize,
    pub d: DMatrix<f64>,
    pub r: Rational,
    pub lambda: f64,
    pub lambda_raw: Rational,
    /// `λ_raw` measured from the numeric trace.
    pub lambda_raw_numeric: f64,
    /// Trace `T − JᵀX⁻¹J` of the unit-factor level-1 form.
    pub schur_raw: DMatrix<f64>,
    /// Largest entry of `|D − λ_raw · schur_raw|`.
    pub residual: f64,
}

impl HarmonicStructure {
    pub fn r_f64(&self) -> f64 {
        to_f64(self.r)
    }

    /// Regular when `λ > r`.
    pub fn is_regular(&self) -> bool {
        self.lambda > self.r_f64()
    }
}

pub fn to_f64(x: Rational) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Sum over cells of the boundary form placed on each cell's corners,
/// scaled by `scale`.
fn assemble(cells: &LevelCells, scale: f64) -> DMatrix<f64> {
    let n = cells.points.len();
    let k = cells.k;
    let mut h = DMatrix::<f64>::zeros(n, n);
    for cell in &cells.cells {
        for a in 0..k {
            let u = cell.corners[a];
            h[(u, u)] -= (k - 1) as f64 * scale;
            for b in 0..k {
                if a != b {
                    h[(u, cell.corners[b])] += scale;
                }
            }
        }
    }
    h
}

/// Trace of `h` onto its first `b` coordinates, `T − JᵀX⁻¹J`.
pub fn schur_complement(h: &DMatrix<f64>, b: usize) -> Result<DMatrix<f64>> {
    let n = h.nrows();
    let t = h.view((0, 0), (b, b));
    let j = h.view((b, 0), (n - b, b));
    let x = h.view((b, b), (n - b, n - b)).into_owned();
    let x_inv_j = x
        .lu()
        .solve(&j.into_owned())
        .ok_or_else(|| Error::Numerical("interior block is singular".into()))?;
    Ok(t - j.transpose() * x_inv_j)
}

/// Exact trace of an integer matrix onto its first `b` coordinates.
pub fn schur_complement_exact(h: &[Vec<Rational>], b: usize) -> Result<Vec<Vec<Rational>>> {
    let n = h.len();
    let m = n - b;
    // solve X Z = J by Gauss-Jordan elimination on [X | J]
    let mut aug: Vec<Vec<Rational>> = (0..m)
        .map(|r| {
            let mut row: Vec<Rational> = (0..m).map(|c| h[b + r][b + c]).collect();
            row.extend((0..b).map(|c| h[b + r][c]));
            row
        })
        .collect();
    let zero = Rational::from_integer(0);
    for col in 0..m {
        let pivot = (col..m)
            .find(|&r| aug[r][col] != zero)
            .ok_or_else(|| Error::Numerical("interior block is singular".into()))?;
        aug.swap(col, pivot);
        let p = aug[col][col];
        for v in aug[col].iter_mut() {
            *v /= p;
        }
        for r in 0..m {
            if r != col && aug[r][col] != zero {
                let f = aug[r][col];
                let pivot_row = aug[col].clone();
                for (v, pv) in aug[r].iter_mut().zip(pivot_row) {
                    *v -= f * pv;
                }
            }
        }
    }
    // result = T − Jᵀ Z with Z = aug[.., m..]
    Ok((0..b)
        .map(|i| {
            (0..b)
                .map(|c| {
                    let mut s = h[i][c];
                    for r in 0..m {
                        s -= h[b + r][i] * aug[r][m + c];
                    }
                    s
                })
                .collect()
        })
        .collect())
}

/// Solves the level-1 renormalization problem with unit conductances and
/// checks the trace identity numerically and exactly.
pub fn renormalize(k: usize) -> Result<HarmonicStructure> {
    if k < 3 {
        return Err(Error::Precondition(format!("need k >= 3, got {k}")));
    }
    let level = level_cells(k, 1, DEFAULT_CELL_BOUND)?;
    let h1 = assemble(&level, 1.0);
    let schur = schur_complement(&h1, k)?;
    let d = boundary_form(k);
    let lambda_raw = renormalization_factor(k).recip();
    let lambda_raw_numeric = d[(0, 1)] / schur[(0, 1)];
    let residual = (&d - &schur * to_f64(lambda_raw)).amax();
    if residual > 1e-10 {
        return Err(Error::Numerical(format!(
            "level-1 trace is not proportional to D (residual {residual:e})"
        )));
    }
    let exact: Vec<Vec<Rational>> = (0..h1.nrows())
        .map(|i| {
            (0..h1.ncols())
                .map(|j| Rational::from_integer(h1[(i, j)].round() as i128))
                .collect()
        })
        .collect();
    let schur_exact = schur_complement_exact(&exact, k)?;
    for (i, row) in schur_exact.iter().enumerate() {
        for (j, &entry) in row.iter().enumerate() {
            let dij = Rational::from_integer(if i == j { -(k as i128 - 1) } else { 1 });
            if entry * lambda_raw != dij {
                return Err(Error::Numerical(format!(
                    "exact trace entry ({i}, {j}) = {entry} breaks proportionality"
                )));
            }
        }
    }
    Ok(HarmonicStructure {
        k,
        d,
        r: renormalization_factor(k),
        lambda: 1.0,
        lambda_raw,
        lambda_raw_numeric,
        schur_raw: schur,
        residual,
    })
}

/// Level-m graph: points of `V_m` and the operator `H_m` with
/// `−E_m(u) = uᵀ H_m u`.
#[derive(Debug, Clone)]
pub struct LevelGraph {
    pub k: usize,
    pub m: usize,
    pub cells: LevelCells,
    pub h: DMatrix<f64>,
}

impl LevelGraph {
    pub fn points(&self) -> &[Address] {
        &self.cells.points
    }

    pub fn energy(&self, u: &DVector<f64>) -> f64 {
        -(u.transpose() * &self.h * u)[(0, 0)]
    }

    /// Minimizing extension of boundary values given on `fixed` indices.
    pub fn harmonic_extension(&self, fixed: &[usize], values: &[f64]) -> Result<DVector<f64>> {
        let n = self.h.nrows();
        let mut is_fixed = vec![false; n];
        for &f in fixed {
            is_fixed[f] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&i| !is_fixed[i]).collect();
        let mut u = DVector::<f64>::zeros(n);
        for (&f, &v) in fixed.iter().zip(values) {
            u[f] = v;
        }
        if free.is_empty() {
            return Ok(u);
        }
        let a = DMatrix::from_fn(free.len(), free.len(), |r, c| -self.h[(free[r], free[c])]);
        let rhs = DVector::from_fn(free.len(), |r, _| {
            fixed
                .iter()
                .zip(values)
                .map(|(&f, &v)| self.h[(free[r], f)] * v)
                .sum::<f64>()
        });
        let sol = a
            .cholesky()
            .ok_or_else(|| Error::Numerical("level graph is disconnected".into()))?
            .solve(&rhs);
        for (r, &i) in free.iter().enumerate() {
            u[i] = sol[r];
        }
        Ok(u)
    }

    /// Effective resistance between two points of `V_m`.
    pub fn resistance(&self, x: usize, y: usize) -> Result<f64> {
        if x == y {
            return Ok(0.0);
        }
        let u = self.harmonic_extension(&[x, y], &[0.0, 1.0])?;
        Ok(1.0 / self.energy(&u))
    }

    /// All pairwise resistances from the pseudo-inverse of `−H_m`.
    pub fn resistance_matrix(&self) -> Result<DMatrix<f64>> {
        let n = self.h.nrows();
        let shift = 1.0 / n as f64;
        let l = -&self.h + DMatrix::from_element(n, n, shift);
        let inv = l
            .try_inverse()
            .ok_or_else(|| Error::Numerical("level graph is disconnected".into()))?;
        let g = inv - DMatrix::from_element(n, n, shift);
        Ok(DMatrix::from_fn(n, n, |i, j| {
            g[(i, i)] + g[(j, j)] - 2.0 * g[(i, j)]
        }))
    }

    /// Index of an address in `V_m`.
    pub fn index_of(&self, a: &Address) -> Option<usize> {
        self.cells.points.iter().position(|p| p == a)
    }
}

/// `H_m = r^{−m} Σ_{|w| = m} R_wᵀ D R_w`.
pub fn level_energy(hs: &HarmonicStructure, m: usize) -> Result<LevelGraph> {
    let cells = level_cells(hs.k, m, DEFAULT_CELL_BOUND)?;
    let scale = hs.r_f64().powi(-(m as i32));
    let h = assemble(&cells, scale);
    Ok(LevelGraph {
        k: hs.k,
        m,
        cells,
        h,
    })
}

/// Resistance between `p_x` and `p_y` computed at level `m`.
pub fn effective_resistance(hs: &HarmonicStructure, m: usize, x: usize, y: usize) -> Result<f64> {
    if x >= hs.k || y >= hs.k {
        return Err(Error::LetterOutOfRange {
            letter: x.max(y),
            k: hs.k,
        });
    }
    level_energy(hs, m)?.resistance(x, y)
}

/// One row of the diameter table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiameterRow {
    pub m: usize,
    /// Largest resistance between two corners of the same m-cell.
    pub diameter: f64,
    /// `diameter(m) / diameter(m−1)`.
    pub ratio: Option<f64>,
}

pub fn cell_diameter_scaling(hs: &HarmonicStructure, m_max: usize) -> Result<Vec<DiameterRow>> {
    let mut rows: Vec<DiameterRow> = Vec::new();
    for m in 0..=m_max {
        let level = level_energy(hs, m)?;
        let r = level.resistance_matrix()?;
        let mut diameter: f64 = 0.0;
        for cell in &level.cells.cells {
            for (a, &u) in cell.corners.iter().enumerate() {
                for &v in &cell.corners[a + 1..] {
                    diameter = diameter.max(r[(u, v)]);
                }
            }
        }
        let ratio = rows.last().map(|prev| diameter / prev.diameter);
        rows.push(DiameterRow { m, diameter, ratio });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_form_shape() {
        let d = boundary_form(4);
        assert_eq!(d[(0, 0)], -3.0);
        assert_eq!(d[(1, 2)], 1.0);
        for i in 0..4 {
            assert_eq!(d.row(i).sum(), 0.0);
        }
    }

    #[test]
    fn renormalization_values() {
        assert_eq!(renormalization_factor(3), Ratio::new(3, 5));
        assert_eq!(renormalization_factor(4), Ratio::new(8, 11));
        for k in 3..=8 {
            let hs = renormalize(k).unwrap();
            let expected = ((k * k - k - 1) as f64) / ((k * (k - 2)) as f64);
            assert!((hs.lambda_raw_numeric - expected).abs() < 1e-10, "k={k}");
            assert!(hs.residual < 1e-10);
            assert!(hs.is_regular());
        }
        assert!(renormalize(2).is_err());
    }

    #[test]
    fn level_zero_is_boundary_form() {
        let hs = renormalize(3).unwrap();
        let l = level_energy(&hs, 0).unwrap();
        assert_eq!(l.h, boundary_form(3));
    }

    #[test]
    fn assembled_forms_are_symmetric_with_zero_rows() {
        for k in 3..=4 {
            let hs = renormalize(k).unwrap();
            for m in 0..=3 {
                let l = level_energy(&hs, m).unwrap();
                assert!((&l.h - l.h.transpose()).amax() < 1e-12);
                for i in 0..l.h.nrows() {
                    assert!(l.h.row(i).sum().abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn sierpinski_resistance() {
        let hs = renormalize(3).unwrap();
        // single free value t: minimize 1 + t² + (1 − t)², giving 3/2
        assert!((effective_resistance(&hs, 0, 0, 1).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        let r1 = effective_resistance(&hs, 1, 0, 1).unwrap();
        let r2 = effective_resistance(&hs, 2, 0, 1).unwrap();
        assert!((r1 - 2.0 / 3.0).abs() < 1e-9 && (r2 - 2.0 / 3.0).abs() < 1e-9);
        assert_eq!(effective_resistance(&hs, 1, 1, 1).unwrap(), 0.0);
        assert!(effective_resistance(&hs, 1, 0, 5).is_err());
    }

    #[test]
    fn resistance_matrix_agrees_with_solves() {
        let hs = renormalize(4).unwrap();
        let l = level_energy(&hs, 2).unwrap();
        let r = l.resistance_matrix().unwrap();
        for (x, y) in [(0, 1), (0, 7), (3, 11)] {
            assert!((r[(x, y)] - l.resistance(x, y).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn exact_schur_on_small_matrix() {
        let h: Vec<Vec<Rational>> = [[-2, 1, 1], [1, -2, 1], [1, 1, -2]]
            .iter()
            .map(|r| r.iter().map(|&v| Rational::from_integer(v)).collect())
            .collect();
        let s = schur_complement_exact(&h, 2).unwrap();
        // eliminating the third node of a unit triangle
        assert_eq!(s[0][0], Ratio::new(-3, 2));
        assert_eq!(s[0][1], Ratio::new(3, 2));
    }
}
