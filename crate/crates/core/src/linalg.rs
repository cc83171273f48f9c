//! Small dense complex linear algebra helpers.

use nalgebra::Complex;

use crate::qfa::{CMatrix, CVector, C64};

fn dot(a: &CVector, b: &CVector) -> C64 {
    a.dotc(b)
}

/// Orthonormalizes `vectors` with modified Gram–Schmidt, dropping any vector
/// whose residual norm falls below `tol`.
pub fn orthonormalize(vectors: &[CVector], tol: f64) -> Vec<CVector> {
    let mut out: Vec<CVector> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        // two passes for stability
        for _ in 0..2 {
            for u in &out {
                let c = dot(u, &w);
                w -= u * c;
            }
        }
        let n = w.norm();
        if n > tol {
            out.push(w / Complex::new(n, 0.0));
        }
    }
    out
}

/// Extends orthonormal columns to a full unitary of size `dim`.
///
/// `fixed` holds `(column index, vector)` pairs. Those columns are kept as
/// given; the rest are filled, in increasing column order, by
/// orthonormalizing the standard basis vectors e_0, e_1, ... against
/// everything placed so far and taking the first survivors.
pub fn complete_unitary(dim: usize, fixed: &[(usize, CVector)]) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    let mut used = vec![false; dim];
    let mut basis: Vec<CVector> = Vec::with_capacity(dim);
    for (col, v) in fixed {
        assert!(!used[*col], "column {col} fixed twice");
        used[*col] = true;
        m.set_column(*col, v);
        basis.push(v.clone());
    }
    let mut candidate = 0;
    for col in 0..dim {
        if used[col] {
            continue;
        }
        loop {
            assert!(candidate < dim, "fixed columns are not orthonormal");
            let mut w = CVector::zeros(dim);
            w[candidate] = Complex::new(1.0, 0.0);
            candidate += 1;
            for _ in 0..2 {
                for u in &basis {
                    let c = dot(u, &w);
                    w -= u * c;
                }
            }
            let n = w.norm();
            if n > 1e-6 {
                let w = w / Complex::new(n, 0.0);
                m.set_column(col, &w);
                basis.push(w);
                break;
            }
        }
    }
    m
}

/// Orthonormal basis (as columns) of the null space of `a`, via SVD of the
/// matrix padded with zero rows to at least square.
pub fn null_space(a: &CMatrix, tol: f64) -> CMatrix {
    let cols = a.ncols();
    if cols == 0 {
        return CMatrix::zeros(0, 0);
    }
    let rows = a.nrows().max(cols);
    let mut padded = CMatrix::zeros(rows, cols);
    padded.view_mut((0, 0), (a.nrows(), cols)).copy_from(a);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let vecs: Vec<CVector> = (0..cols)
        .filter(|&i| svd.singular_values[i] <= tol)
        .map(|i| v_t.row(i).adjoint())
        .collect();
    columns_to_matrix(cols, &orthonormalize(&vecs, 1e-9))
}

/// Stacks column vectors into a `dim × k` matrix.
pub fn columns_to_matrix(dim: usize, cols: &[CVector]) -> CMatrix {
    let mut m = CMatrix::zeros(dim, cols.len());
    for (i, c) in cols.iter().enumerate() {
        m.set_column(i, c);
    }
    m
}

/// Real vector as complex.
pub fn real_vector(values: &[f64]) -> CVector {
    CVector::from_iterator(values.len(), values.iter().map(|&x| Complex::new(x, 0.0)))
}

/// Real row-major matrix as complex.
pub fn real_matrix(rows: usize, cols: usize, values: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(rows, cols, values.iter().map(|&x| Complex::new(x, 0.0)))
}

/// max |(UᴴU − I)_{ij}|.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let g = u.adjoint() * u - CMatrix::identity(u.ncols(), u.ncols());
    g.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Permutation matrix with `perm[j]` the image of basis vector j.
pub fn permutation_matrix(perm: &[usize]) -> CMatrix {
    let n = perm.len();
    let mut m = CMatrix::zeros(n, n);
    for (j, &i) in perm.iter().enumerate() {
        m[(i, j)] = Complex::new(1.0, 0.0);
    }
    m
}
