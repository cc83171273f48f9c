//! Splitting the non-halting space into a part where a word acts
//! isometrically and a part whose norm the word drives to zero.
//!
//! For a contraction M on a k-dimensional space the sets
//! H_j = {v : ‖M^j v‖ = ‖v‖} = ker(I − (M^j)ᴴ M^j) form a decreasing chain
//! of subspaces that stops shrinking as soon as two consecutive terms agree,
//! so H_k is the largest subspace on which every power of M is isometric.
//! That subspace reduces M; on its orthogonal complement the spectral
//! radius is below one. We compute H_k from a Hermitian eigendecomposition
//! and cross-check its dimension against the number of unimodular
//! eigenvalues of M.

use thiserror::Error;

use crate::linalg::{columns_to_matrix, null_space, orthonormalize};
use crate::qfa::{CMatrix, CVector, Qfa, QfaError, Symbol, C64};

/// Eigenvalue cutoff defining the isometric part.
pub const ISOMETRY_CUTOFF: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("word must be nonempty")]
    EmptyWord,
    #[error("no non-halting states")]
    NoNonHalting,
    #[error(transparent)]
    Qfa(#[from] QfaError),
}

/// Orthonormal bases of the two parts, as columns over the full basis
/// (halting coordinates are zero).
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub e1_basis: CMatrix,
    pub e2_basis: CMatrix,
    pub tol: f64,
    /// Indices of the non-halting basis states.
    pub nonhalting: Vec<usize>,
    /// Unimodular eigenvalue count of the restricted operator, for single
    /// words; agrees with dim E₁ unless the problem is ill-conditioned.
    pub unimodular_eigenvalues: Option<usize>,
}

impl Decomposition {
    pub fn dim_e1(&self) -> usize {
        self.e1_basis.ncols()
    }

    pub fn dim_e2(&self) -> usize {
        self.e2_basis.ncols()
    }

    /// Orthogonal projection of `v` onto E₂.
    pub fn project_e2(&self, v: &CVector) -> CVector {
        &self.e2_basis * (self.e2_basis.adjoint() * v)
    }
}

/// Restriction of V′_word to the non-halting coordinates.
fn restricted(qfa: &Qfa, word: &[Symbol], non: &[usize]) -> Result<CMatrix, SpectralError> {
    let full = qfa.nonhalting_operator(word)?;
    let k = non.len();
    Ok(CMatrix::from_fn(k, k, |i, j| full[(non[i], non[j])]))
}

fn embed(qfa: &Qfa, non: &[usize], local: &CMatrix) -> CMatrix {
    let mut m = CMatrix::zeros(qfa.dimension(), local.ncols());
    for (i, &g) in non.iter().enumerate() {
        m.row_mut(g).copy_from(&local.row(i));
    }
    m
}

/// Isometric subspace of a k×k contraction, as orthonormal columns.
fn isometric_part(m: &CMatrix, tol: f64) -> CMatrix {
    let k = m.nrows();
    let mut p = CMatrix::identity(k, k);
    for _ in 0..k {
        p = m * p;
    }
    let gram = p.adjoint() * &p;
    let gram = (&gram + gram.adjoint()) * C64::new(0.5, 0.0);
    let eig = gram.symmetric_eigen();
    let cutoff = (1.0 - tol).powi(2 * k as i32);
    let cols: Vec<CVector> =
        (0..k).filter(|&i| eig.eigenvalues[i] >= cutoff).map(|i| eig.eigenvectors.column(i).into_owned()).collect();
    columns_to_matrix(k, &orthonormalize(&cols, 1e-9))
}

/// Orthonormal complement of the columns of `b` in C^k.
fn complement(b: &CMatrix, k: usize) -> CMatrix {
    if b.ncols() == 0 {
        return CMatrix::identity(k, k);
    }
    null_space(&b.adjoint(), 1e-9)
}

fn parse(qfa: &Qfa, word: &str) -> Result<Vec<Symbol>, SpectralError> {
    let w = qfa.parse_symbols(word)?;
    if w.is_empty() {
        return Err(SpectralError::EmptyWord);
    }
    Ok(w)
}

fn nonhalting(qfa: &Qfa) -> Result<Vec<usize>, SpectralError> {
    let non = qfa.non_halting();
    if non.is_empty() {
        return Err(SpectralError::NoNonHalting);
    }
    Ok(non)
}

/// Decomposition for one word (endmarkers allowed as `^`, `$`).
pub fn decompose_word(qfa: &Qfa, x: &str) -> Result<Decomposition, SpectralError> {
    let word = parse(qfa, x)?;
    let non = nonhalting(qfa)?;
    let m = restricted(qfa, &word, &non)?;
    let e1 = isometric_part(&m, ISOMETRY_CUTOFF);
    let e2 = complement(&e1, non.len());
    // the complex Schur form is upper triangular with the eigenvalues on its diagonal
    let (_, t) = m.clone().schur().unpack();
    let unimodular = t.diagonal().iter().filter(|z| z.norm() >= 1.0 - ISOMETRY_CUTOFF).count();
    Ok(Decomposition {
        e1_basis: embed(qfa, &non, &e1),
        e2_basis: embed(qfa, &non, &e2),
        tol: ISOMETRY_CUTOFF,
        nonhalting: non,
        unimodular_eigenvalues: Some(unimodular),
    })
}

/// Largest subspace of E₁(x) ∩ E₁(y) mapped into itself by both V′_x and
/// V′_y. Both act isometrically there, hence so does every word over {x,y}.
pub fn decompose_pair(qfa: &Qfa, x: &str, y: &str) -> Result<Decomposition, SpectralError> {
    let (wx, wy) = (parse(qfa, x)?, parse(qfa, y)?);
    let non = nonhalting(qfa)?;
    let k = non.len();
    let (mx, my) = (restricted(qfa, &wx, &non)?, restricted(qfa, &wy, &non)?);
    let (ex, ey) = (isometric_part(&mx, ISOMETRY_CUTOFF), isometric_part(&my, ISOMETRY_CUTOFF));

    // intersection: vectors annihilated by both complementary projectors
    let id = CMatrix::identity(k, k);
    let qx = &id - &ex * ex.adjoint();
    let qy = &id - &ey * ey.adjoint();
    let mut stacked = CMatrix::zeros(2 * k, k);
    stacked.view_mut((0, 0), (k, k)).copy_from(&qx);
    stacked.view_mut((k, 0), (k, k)).copy_from(&qy);
    let mut basis = null_space(&stacked, 1e-7);

    for _ in 0..=k {
        if basis.ncols() == 0 {
            break;
        }
        let r = basis.ncols();
        let outside = &id - &basis * basis.adjoint();
        let mut s = CMatrix::zeros(2 * k, r);
        s.view_mut((0, 0), (k, r)).copy_from(&(&outside * &mx * &basis));
        s.view_mut((k, 0), (k, r)).copy_from(&(&outside * &my * &basis));
        let keep = null_space(&s, 1e-7);
        if keep.ncols() == r {
            break;
        }
        let next = &basis * keep;
        let cols: Vec<CVector> = next.column_iter().map(|c| c.into_owned()).collect();
        basis = columns_to_matrix(k, &orthonormalize(&cols, 1e-9));
    }
    let e2 = complement(&basis, k);
    Ok(Decomposition {
        e1_basis: embed(qfa, &non, &basis),
        e2_basis: embed(qfa, &non, &e2),
        tol: ISOMETRY_CUTOFF,
        nonhalting: non,
        unimodular_eigenvalues: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Block {
    X,
    Y,
}

/// A found shrinking word, as blocks and spelled out.
#[derive(Debug, Clone, PartialEq)]
pub struct ShrinkingWord {
    pub blocks: Vec<Block>,
    pub word: String,
    pub norm: f64,
}

/// Beam search (width 8) over words made of x and y blocks for t with
/// ‖V′_t v‖ < eps. `max_len` counts blocks. `None` means the budget ran out,
/// not that no such word exists.
pub fn find_shrinking_word(
    qfa: &Qfa,
    x: &str,
    y: &str,
    v: &CVector,
    eps: f64,
    max_len: usize,
) -> Result<Option<ShrinkingWord>, SpectralError> {
    const BEAM: usize = 8;
    let (wx, wy) = (parse(qfa, x)?, parse(qfa, y)?);
    let ops = [qfa.nonhalting_operator(&wx)?, qfa.nonhalting_operator(&wy)?];
    let spell = |blocks: &[Block]| -> String {
        blocks.iter().map(|b| if *b == Block::X { x } else { y }).collect()
    };
    if v.norm() < eps {
        return Ok(Some(ShrinkingWord { blocks: vec![], word: String::new(), norm: v.norm() }));
    }
    let mut beam: Vec<(Vec<Block>, CVector)> = vec![(vec![], v.clone())];
    for _ in 0..max_len {
        let mut children: Vec<(Vec<Block>, CVector, f64)> = Vec::new();
        for (blocks, state) in &beam {
            for (b, op) in [Block::X, Block::Y].into_iter().zip(&ops) {
                let next = op * state;
                let norm = next.norm();
                let mut bl = blocks.clone();
                bl.push(b);
                children.push((bl, next, norm));
            }
        }
        children.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some((bl, _, norm)) = children.iter().find(|c| c.2 < eps) {
            return Ok(Some(ShrinkingWord { word: spell(bl), blocks: bl.clone(), norm: *norm }));
        }
        // stable sort keeps lexicographic order among equal norms
        children.sort_by(|a, b| a.2.total_cmp(&b.2));
        beam = children.into_iter().take(BEAM).map(|(bl, s, _)| (bl, s)).collect();
    }
    Ok(None)
}

/// ‖V′_{x^j} v‖ for j = 0..=k_max.
pub fn norm_decay(qfa: &Qfa, x: &str, v: &CVector, k_max: usize) -> Result<Vec<(usize, f64)>, SpectralError> {
    let op = qfa.nonhalting_operator(&parse(qfa, x)?)?;
    let mut cur = v.clone();
    let mut out = vec![(0, cur.norm())];
    for j in 1..=k_max {
        cur = &op * cur;
        out.push((j, cur.norm()));
    }
    Ok(out)
}
