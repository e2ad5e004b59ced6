//! Dense complex linear maps and the handful of structural operations the
//! rest of the crate evaluates diagrams into: composition, tensor product,
//! adjoint, trace, operator names (vectorization), and the matrix-algebra
//! composition map.
//!
//! A [`LinearMap`] is a dense `cod x dom` complex matrix. States are maps
//! out of dimension 1 (single column), effects are maps into dimension 1
//! (single row). Dimensions are small by design (everything downstream is
//! desk scale), so there is no sparsity and no attempt at clever storage.
//!
//! Index conventions, fixed once here and relied on everywhere:
//! - tensor products put the left factor on the major index:
//!   `(i, j) -> i * right_dim + j`;
//! - the name of a square map is row-index major:
//!   `name(L)[i * n + j] = L[i][j]`.

use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::Scalar;

/// Errors from structural linear algebra operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    /// Two maps were combined along incompatible dimensions.
    #[error("dimension mismatch in {op}: left is {lhs_cod}x{lhs_dom}, right is {rhs_cod}x{rhs_dom}")]
    DimensionMismatch {
        op: &'static str,
        lhs_cod: usize,
        lhs_dom: usize,
        rhs_cod: usize,
        rhs_dom: usize,
    },

    /// A square-only operation was applied to a rectangular map.
    #[error("map is not square: {cod}x{dom}")]
    NotSquare { cod: usize, dom: usize },

    /// Maps must have at least one input and one output dimension.
    #[error("zero dimension in {cod}x{dom} map")]
    ZeroDimension { cod: usize, dom: usize },

    /// Entry buffer length does not match the declared shape.
    #[error("expected {expected} entries for a {cod}x{dom} map, got {got}")]
    BadEntryCount {
        cod: usize,
        dom: usize,
        expected: usize,
        got: usize,
    },

    /// All library outputs must be finite.
    #[error("non-finite entry at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    /// An operation on states was applied to a map that is not a state.
    #[error("expected a state of dimension {expected}, got a {cod}x{dom} map")]
    NotAState {
        expected: usize,
        cod: usize,
        dom: usize,
    },
}

/// A dense complex linear map between finite-dimensional Hilbert spaces.
///
/// Stored row major: the entry at output basis index `r` and input basis
/// index `c` lives at `entries[r * dom + c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap<T> {
    cod: usize,
    dom: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Scalar> LinearMap<T> {
    /// Builds a map from explicit row-major entries, validating shape and
    /// finiteness.
    pub fn new(cod: usize, dom: usize, entries: Vec<Complex<T>>) -> Result<Self, LinalgError> {
        if cod == 0 || dom == 0 {
            return Err(LinalgError::ZeroDimension { cod, dom });
        }
        if entries.len() != cod * dom {
            return Err(LinalgError::BadEntryCount {
                cod,
                dom,
                expected: cod * dom,
                got: entries.len(),
            });
        }
        for (k, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(LinalgError::NonFinite {
                    row: k / dom,
                    col: k % dom,
                });
            }
        }
        Ok(Self { cod, dom, entries })
    }

    /// Builds a map by tabulating `f(row, col)`. Panics on zero dimensions;
    /// the closure must produce finite values.
    pub fn from_fn(cod: usize, dom: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        assert!(cod > 0 && dom > 0, "zero dimension in from_fn");
        let mut entries = Vec::with_capacity(cod * dom);
        for r in 0..cod {
            for c in 0..dom {
                entries.push(f(r, c));
            }
        }
        Self { cod, dom, entries }
    }

    /// The identity on an `n`-dimensional space.
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| {
            if r == c {
                Complex::one()
            } else {
                Complex::zero()
            }
        })
    }

    /// The zero map of the given shape.
    pub fn zeros(cod: usize, dom: usize) -> Self {
        Self::from_fn(cod, dom, |_, _| Complex::zero())
    }

    /// A 1x1 map holding a single scalar.
    pub fn scalar(z: Complex<T>) -> Self {
        Self {
            cod: 1,
            dom: 1,
            entries: vec![z],
        }
    }

    /// The computational basis state `|i>` in dimension `dim`.
    pub fn basis_state(dim: usize, i: usize) -> Self {
        assert!(i < dim, "basis index {i} out of range for dimension {dim}");
        Self::from_fn(dim, 1, |r, _| {
            if r == i {
                Complex::one()
            } else {
                Complex::zero()
            }
        })
    }

    /// The basis effect `<i|` in dimension `dim`.
    pub fn basis_effect(dim: usize, i: usize) -> Self {
        Self::basis_state(dim, i).adjoint()
    }

    /// The normalized uniform superposition state on `n` basis elements.
    pub fn uniform_state(n: usize) -> Self {
        let amp = T::one() / T::from_usize_lossy(n).sqrt();
        Self::from_fn(n, 1, |_, _| Complex::new(amp, T::zero()))
    }

    /// The swap map `A (x) B -> B (x) A` on dimensions `a` and `b`.
    pub fn swap(a: usize, b: usize) -> Self {
        assert!(a > 0 && b > 0, "zero dimension in swap");
        Self::from_fn(a * b, a * b, |r, c| {
            let (i, j) = (c / b, c % b);
            if r == j * a + i {
                Complex::one()
            } else {
                Complex::zero()
            }
        })
    }

    /// Output dimension (number of rows).
    pub fn cod(&self) -> usize {
        self.cod
    }

    /// Input dimension (number of columns).
    pub fn dom(&self) -> usize {
        self.dom
    }

    /// True when the map has equal input and output dimension.
    pub fn is_square(&self) -> bool {
        self.cod == self.dom
    }

    /// The entry at output index `r`, input index `c`.
    pub fn entry(&self, r: usize, c: usize) -> Complex<T> {
        assert!(r < self.cod && c < self.dom, "entry index out of range");
        self.entries[r * self.dom + c]
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    /// Matrix product `self . rhs` (apply `rhs` first, then `self`).
    pub fn compose(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.dom != rhs.cod {
            return Err(LinalgError::DimensionMismatch {
                op: "compose",
                lhs_cod: self.cod,
                lhs_dom: self.dom,
                rhs_cod: rhs.cod,
                rhs_dom: rhs.dom,
            });
        }
        let mut entries = vec![Complex::zero(); self.cod * rhs.dom];
        for r in 0..self.cod {
            for k in 0..self.dom {
                let lk = self.entries[r * self.dom + k];
                if lk.is_zero() {
                    continue;
                }
                for c in 0..rhs.dom {
                    entries[r * rhs.dom + c] += lk * rhs.entries[k * rhs.dom + c];
                }
            }
        }
        Ok(Self {
            cod: self.cod,
            dom: rhs.dom,
            entries,
        })
    }

    /// Tensor (Kronecker) product, left factor on the major index.
    pub fn tensor(&self, rhs: &Self) -> Self {
        let cod = self.cod * rhs.cod;
        let dom = self.dom * rhs.dom;
        Self::from_fn(cod, dom, |r, c| {
            let (ra, rb) = (r / rhs.cod, r % rhs.cod);
            let (ca, cb) = (c / rhs.dom, c % rhs.dom);
            self.entries[ra * self.dom + ca] * rhs.entries[rb * rhs.dom + cb]
        })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dom, self.cod, |r, c| {
            self.entries[c * self.dom + r].conj()
        })
    }

    /// Sum of the diagonal. Square maps only.
    pub fn trace(&self) -> Result<Complex<T>, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                cod: self.cod,
                dom: self.dom,
            });
        }
        let mut acc = Complex::zero();
        for i in 0..self.cod {
            acc += self.entries[i * self.dom + i];
        }
        Ok(acc)
    }

    /// The name of a square map: the state in dimension `n^2` whose
    /// component at composite index `i*n + j` is the entry at `(i, j)`.
    pub fn name(&self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                cod: self.cod,
                dom: self.dom,
            });
        }
        Ok(Self {
            cod: self.cod * self.dom,
            dom: 1,
            entries: self.entries.clone(),
        })
    }

    /// Inverse of [`name`](Self::name): reshapes an `n^2`-dimensional state
    /// back into the square map it names.
    pub fn unname(&self, n: usize) -> Result<Self, LinalgError> {
        if self.dom != 1 || self.cod != n * n {
            return Err(LinalgError::NotAState {
                expected: n * n,
                cod: self.cod,
                dom: self.dom,
            });
        }
        Ok(Self {
            cod: n,
            dom: n,
            entries: self.entries.clone(),
        })
    }

    /// The multiplication map of the matrix algebra on `n`-dimensional
    /// space: sends `name(A) (x) name(B)` to `name(A . B)`. Shape
    /// `n^2 x n^4`; contracts the inner index pair.
    pub fn comp(n: usize) -> Self {
        assert!(n > 0, "zero dimension in comp");
        let n2 = n * n;
        let mut out = Self::zeros(n2, n2 * n2);
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let row = i * n + l;
                    let col = (i * n + j) * n2 + (j * n + l);
                    out.entries[row * out.dom + col] = Complex::one();
                }
            }
        }
        out
    }

    /// Entrywise sum. Shapes must agree.
    pub fn add(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cod != rhs.cod || self.dom != rhs.dom {
            return Err(LinalgError::DimensionMismatch {
                op: "add",
                lhs_cod: self.cod,
                lhs_dom: self.dom,
                rhs_cod: rhs.cod,
                rhs_dom: rhs.dom,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            cod: self.cod,
            dom: self.dom,
            entries,
        })
    }

    /// Entrywise difference. Shapes must agree.
    pub fn sub(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cod != rhs.cod || self.dom != rhs.dom {
            return Err(LinalgError::DimensionMismatch {
                op: "sub",
                lhs_cod: self.cod,
                lhs_dom: self.dom,
                rhs_cod: rhs.cod,
                rhs_dom: rhs.dom,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            cod: self.cod,
            dom: self.dom,
            entries,
        })
    }

    /// Multiplies every entry by `z`.
    pub fn scale(&self, z: Complex<T>) -> Self {
        let entries = self.entries.iter().map(|a| a * z).collect();
        Self {
            cod: self.cod,
            dom: self.dom,
            entries,
        }
    }

    /// Multiplies every entry by the real factor `x`.
    pub fn scale_re(&self, x: T) -> Self {
        self.scale(Complex::new(x, T::zero()))
    }

    /// Frobenius norm of the entries; for states this is the vector norm.
    pub fn norm(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    /// Largest entrywise absolute value.
    pub fn max_abs(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    /// Largest entrywise absolute difference. Shapes must agree.
    pub fn max_abs_diff(&self, rhs: &Self) -> Result<T, LinalgError> {
        if self.cod != rhs.cod || self.dom != rhs.dom {
            return Err(LinalgError::DimensionMismatch {
                op: "max_abs_diff",
                lhs_cod: self.cod,
                lhs_dom: self.dom,
                rhs_cod: rhs.cod,
                rhs_dom: rhs.dom,
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&rhs.entries)
            .fold(T::zero(), |acc, (a, b)| acc.max((a - b).norm())))
    }

    /// True when shapes agree and the maps differ entrywise by at most `tol`.
    pub fn approx_eq(&self, rhs: &Self, tol: T) -> bool {
        match self.max_abs_diff(rhs) {
            Ok(d) => d <= tol,
            Err(_) => false,
        }
    }

    /// Density matrix of the first tensor factor of a state on a space of
    /// dimension `dim_first * dim_second`, tracing out the second factor.
    pub fn partial_trace_second(
        &self,
        dim_first: usize,
        dim_second: usize,
    ) -> Result<Self, LinalgError> {
        if self.dom != 1 || self.cod != dim_first * dim_second {
            return Err(LinalgError::NotAState {
                expected: dim_first * dim_second,
                cod: self.cod,
                dom: self.dom,
            });
        }
        Ok(Self::from_fn(dim_first, dim_first, |i, j| {
            let mut acc = Complex::zero();
            for k in 0..dim_second {
                acc += self.entries[i * dim_second + k] * self.entries[j * dim_second + k].conj();
            }
            acc
        }))
    }
}

impl<T: Scalar> fmt::Display for LinearMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.cod, self.dom)?;
        for r in 0..self.cod {
            for c in 0..self.dom {
                let z = self.entries[r * self.dom + c];
                if c > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{:+.4}{:+.4}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type Map = LinearMap<f64>;
    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    /// Independent naive triple-loop product used as a composition oracle.
    fn naive_product(g: &Map, f: &Map) -> Vec<C> {
        assert_eq!(g.dom(), f.cod());
        let mut out = vec![c(0.0, 0.0); g.cod() * f.dom()];
        for r in 0..g.cod() {
            for col in 0..f.dom() {
                let mut acc = c(0.0, 0.0);
                for k in 0..g.dom() {
                    acc += g.entry(r, k) * f.entry(k, col);
                }
                out[r * f.dom() + col] = acc;
            }
        }
        out
    }

    /// Independent Kronecker-product oracle.
    fn naive_kronecker(a: &Map, b: &Map) -> Vec<C> {
        let cod = a.cod() * b.cod();
        let dom = a.dom() * b.dom();
        let mut out = vec![c(0.0, 0.0); cod * dom];
        for ia in 0..a.cod() {
            for ib in 0..b.cod() {
                for ja in 0..a.dom() {
                    for jb in 0..b.dom() {
                        let r = ia * b.cod() + ib;
                        let col = ja * b.dom() + jb;
                        out[r * dom + col] = a.entry(ia, ja) * b.entry(ib, jb);
                    }
                }
            }
        }
        out
    }

    fn entry_strategy() -> impl Strategy<Value = C> {
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| c(re, im))
    }

    fn map_strategy(cod: usize, dom: usize) -> impl Strategy<Value = Map> {
        prop::collection::vec(entry_strategy(), cod * dom)
            .prop_map(move |v| Map::new(cod, dom, v).unwrap())
    }

    fn shaped_map_strategy() -> impl Strategy<Value = Map> {
        (1usize..5, 1usize..5)
            .prop_flat_map(|(cod, dom)| map_strategy(cod, dom))
    }

    #[test]
    fn compose_identity_is_identity() {
        let id = Map::identity(3);
        assert!(id.compose(&id).unwrap().approx_eq(&id, 0.0));
    }

    #[test]
    fn sigma_applied_to_basis_states() {
        // The alternating character on two points as a row vector (1, -1).
        let sigma = Map::new(1, 2, vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let x0 = Map::basis_state(2, 0);
        let x1 = Map::basis_state(2, 1);
        assert_eq!(sigma.compose(&x0).unwrap().entry(0, 0), c(1.0, 0.0));
        assert_eq!(sigma.compose(&x1).unwrap().entry(0, 0), c(-1.0, 0.0));
    }

    #[test]
    fn compose_shape_mismatch_is_rejected() {
        let a = Map::identity(2);
        let b = Map::identity(3);
        assert!(matches!(
            a.compose(&b),
            Err(LinalgError::DimensionMismatch { op: "compose", .. })
        ));
    }

    #[test]
    fn tensor_of_identities() {
        let t = Map::identity(2).tensor(&Map::identity(3));
        assert!(t.approx_eq(&Map::identity(6), 0.0));
    }

    #[test]
    fn tensor_of_basis_states_uses_left_major_index() {
        let t = Map::basis_state(2, 0).tensor(&Map::basis_state(2, 1));
        assert!(t.approx_eq(&Map::basis_state(4, 1), 0.0));
    }

    #[test]
    fn adjoint_of_sigma_is_column() {
        let sigma = Map::new(1, 2, vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let dag = sigma.adjoint();
        assert_eq!(dag.cod(), 2);
        assert_eq!(dag.dom(), 1);
        assert_eq!(dag.entry(0, 0), c(1.0, 0.0));
        assert_eq!(dag.entry(1, 0), c(-1.0, 0.0));
    }

    #[test]
    fn trace_of_identity_is_dimension() {
        assert_eq!(Map::identity(5).trace().unwrap(), c(5.0, 0.0));
        assert_eq!(Map::zeros(4, 4).trace().unwrap(), c(0.0, 0.0));
        assert!(Map::zeros(2, 3).trace().is_err());
    }

    #[test]
    fn name_of_identity_two() {
        let n = Map::identity(2).name().unwrap();
        assert_eq!(n.cod(), 4);
        assert_eq!(n.entry(0, 0), c(1.0, 0.0));
        assert_eq!(n.entry(1, 0), c(0.0, 0.0));
        assert_eq!(n.entry(2, 0), c(0.0, 0.0));
        assert_eq!(n.entry(3, 0), c(1.0, 0.0));
    }

    #[test]
    fn name_of_rank_one_map() {
        // |0><1| vectorizes to the composite index (0, 1).
        let m = Map::basis_state(2, 0)
            .compose(&Map::basis_effect(2, 1))
            .unwrap();
        let n = m.name().unwrap();
        assert!(n.approx_eq(&Map::basis_state(4, 1), 0.0));
    }

    #[test]
    fn comp_multiplies_names() {
        // Pauli X squared is the identity.
        let x = Map::new(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let nx = x.name().unwrap();
        let got = Map::comp(2).compose(&nx.tensor(&nx)).unwrap();
        assert!(got.approx_eq(&Map::identity(2).name().unwrap(), 1e-15));
    }

    #[test]
    fn comp_one_is_scalar_multiplication() {
        let a = Map::scalar(c(2.0, 1.0)).name().unwrap();
        let b = Map::scalar(c(0.5, -3.0)).name().unwrap();
        let got = Map::comp(1).compose(&a.tensor(&b)).unwrap();
        assert_eq!(got.entry(0, 0), c(2.0, 1.0) * c(0.5, -3.0));
    }

    #[test]
    fn swap_exchanges_factors() {
        let s = Map::swap(2, 3);
        for i in 0..2 {
            for j in 0..3 {
                let v = Map::basis_state(2, i).tensor(&Map::basis_state(3, j));
                let w = Map::basis_state(3, j).tensor(&Map::basis_state(2, i));
                assert!(s.compose(&v).unwrap().approx_eq(&w, 0.0));
            }
        }
    }

    #[test]
    fn approx_eq_thresholds() {
        let a = Map::identity(3);
        assert!(a.approx_eq(&Map::identity(3), 1e-9));
        assert!(!a.approx_eq(&Map::zeros(3, 3), 1e-9));
        assert!(!a.approx_eq(&Map::identity(2), 1e9));
        let perturbed = a.add(&Map::from_fn(3, 3, |_, _| c(1e-12, 0.0))).unwrap();
        assert!(a.approx_eq(&perturbed, 1e-9));
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        let bad = Map::new(1, 2, vec![c(f64::NAN, 0.0), c(0.0, 0.0)]);
        assert!(matches!(bad, Err(LinalgError::NonFinite { row: 0, col: 0 })));
        assert!(matches!(
            Map::new(0, 2, vec![]),
            Err(LinalgError::ZeroDimension { .. })
        ));
        assert!(matches!(
            Map::new(2, 2, vec![c(0.0, 0.0)]),
            Err(LinalgError::BadEntryCount { .. })
        ));
    }

    #[test]
    fn partial_trace_of_product_state() {
        let psi = Map::uniform_state(2).tensor(&Map::basis_state(3, 1));
        let rho = psi.partial_trace_second(2, 3).unwrap();
        let expected = Map::from_fn(2, 2, |_, _| c(0.5, 0.0));
        assert!(rho.approx_eq(&expected, 1e-15));
        // Purity of a product marginal.
        let purity = rho.compose(&rho).unwrap().trace().unwrap();
        assert!((purity.re - 1.0).abs() < 1e-12 && purity.im.abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn compose_matches_naive_product(
            g in map_strategy(3, 2),
            f in map_strategy(2, 4),
        ) {
            let got = g.compose(&f).unwrap();
            let want = naive_product(&g, &f);
            for r in 0..3 {
                for col in 0..4 {
                    let d = got.entry(r, col) - want[r * 4 + col];
                    prop_assert!(d.norm() < 1e-12);
                }
            }
        }

        #[test]
        fn compose_is_associative(
            a in map_strategy(2, 3),
            b in map_strategy(3, 4),
            c in map_strategy(4, 2),
        ) {
            let left = a.compose(&b).unwrap().compose(&c).unwrap();
            let right = a.compose(&b.compose(&c).unwrap()).unwrap();
            prop_assert!(left.approx_eq(&right, 1e-12));
        }

        #[test]
        fn tensor_matches_kronecker_oracle(
            a in shaped_map_strategy(),
            b in shaped_map_strategy(),
        ) {
            let got = a.tensor(&b);
            let want = naive_kronecker(&a, &b);
            prop_assert_eq!(got.entries(), want.as_slice());
        }

        #[test]
        fn tensor_is_associative(
            a in map_strategy(2, 2),
            b in map_strategy(3, 2),
            c in map_strategy(2, 3),
        ) {
            let left = a.tensor(&b).tensor(&c);
            let right = a.tensor(&b.tensor(&c));
            prop_assert!(left.approx_eq(&right, 1e-12));
        }

        #[test]
        fn interchange_law(
            t in map_strategy(2, 2),
            s in map_strategy(2, 2),
            v in map_strategy(2, 2),
            u in map_strategy(2, 2),
        ) {
            let lhs = t.compose(&s).unwrap().tensor(&v.compose(&u).unwrap());
            let rhs = t.tensor(&v).compose(&s.tensor(&u)).unwrap();
            prop_assert!(lhs.approx_eq(&rhs, 1e-12));
        }

        #[test]
        fn adjoint_is_involution(a in shaped_map_strategy()) {
            prop_assert_eq!(a.adjoint().adjoint(), a);
        }

        #[test]
        fn adjoint_moves_across_inner_product(
            f in map_strategy(3, 2),
            x in map_strategy(3, 1),
            y in map_strategy(2, 1),
        ) {
            // <adjoint(f) x, y> == <x, f y> with the left slot conjugated.
            let lhs = f
                .compose(&y)
                .unwrap()
                .adjoint()
                .compose(&x)
                .unwrap()
                .entry(0, 0)
                .conj();
            let rhs = x
                .adjoint()
                .compose(&f.compose(&y).unwrap())
                .unwrap()
                .entry(0, 0);
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn trace_is_cyclic(
            l in map_strategy(3, 3),
            m in map_strategy(3, 3),
        ) {
            let a = l.compose(&m).unwrap().trace().unwrap();
            let b = m.compose(&l).unwrap().trace().unwrap();
            prop_assert!((a - b).norm() < 1e-12);
        }

        #[test]
        fn trace_of_tensor_is_product_of_traces(
            a in map_strategy(2, 2),
            b in map_strategy(3, 3),
        ) {
            let lhs = a.tensor(&b).trace().unwrap();
            let rhs = a.trace().unwrap() * b.trace().unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn comp_composes_names(
            g in map_strategy(2, 2),
            f in map_strategy(2, 2),
        ) {
            let lhs = Map::comp(2)
                .compose(&g.name().unwrap().tensor(&f.name().unwrap()))
                .unwrap();
            let rhs = g.compose(&f).unwrap().name().unwrap();
            prop_assert!(lhs.approx_eq(&rhs, 1e-12));
        }

        #[test]
        fn comp_is_associative(
            a in map_strategy(2, 2),
            b in map_strategy(2, 2),
            c in map_strategy(2, 2),
        ) {
            let comp = Map::comp(2);
            let (na, nb, nc) = (a.name().unwrap(), b.name().unwrap(), c.name().unwrap());
            let ab_then_c = comp
                .compose(&comp.compose(&na.tensor(&nb)).unwrap().tensor(&nc))
                .unwrap();
            let a_then_bc = comp
                .compose(&na.tensor(&comp.compose(&nb.tensor(&nc)).unwrap()))
                .unwrap();
            prop_assert!(ab_then_c.approx_eq(&a_then_bc, 1e-12));
        }

        #[test]
        fn unname_inverts_name(a in map_strategy(3, 3)) {
            let back = a.name().unwrap().unname(3).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
