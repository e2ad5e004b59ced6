//! Classical structures on the free Hilbert space of a finite set.
//!
//! A finite set of size `n` carries a commutative special dagger-Frobenius
//! algebra in the basis it freely generates: multiplication compares basis
//! labels, the unit is the all-ones state, and their adjoints copy and
//! delete basis elements. This module builds those generators, verifies
//! the algebra axioms numerically, and linearizes set functions into the
//! same picture, together with the numeric characterizations of injective
//! and evenly surjective functions.

use num_complex::Complex;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::LinearMap;
use crate::scalar::Scalar;

/// Errors from classical-structure operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetAlgError {
    /// A function table's image list does not match its domain size.
    #[error("function table has {got} images for a domain of size {dom}")]
    BadImageCount { dom: usize, got: usize },

    /// A function table maps some element outside its codomain.
    #[error("image {value} at position {position} is outside codomain of size {cod}")]
    ImageOutOfRange {
        position: usize,
        value: usize,
        cod: usize,
    },

    /// Two function tables were composed along different sets.
    #[error("cannot compose: inner codomain has size {inner}, outer domain has size {outer}")]
    NotComposable { inner: usize, outer: usize },

    /// Maps handed to a verification routine do not have algebra shapes.
    #[error("inconsistent shapes for an algebra: multiplication is {m_cod}x{m_dom}, unit is {u_cod}x{u_dom}")]
    NotAlgebraShaped {
        m_cod: usize,
        m_dom: usize,
        u_cod: usize,
        u_dom: usize,
    },

    /// A linear map's shape does not match the sets it was checked against.
    #[error("map is {cod}x{dom} but was checked against sets of sizes {expected_dom} -> {expected_cod}")]
    WrongShape {
        cod: usize,
        dom: usize,
        expected_dom: usize,
        expected_cod: usize,
    },
}

/// A finite set, known to the algebra only through its size. Elements are
/// the indices `0..size`. The label is display metadata and never affects
/// any computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSet {
    size: usize,
    label: String,
}

impl FiniteSet {
    /// An unlabeled set of the given size. Panics on size zero.
    pub fn new(size: usize) -> Self {
        assert!(size >= 1, "finite sets must be nonempty");
        Self {
            size,
            label: String::new(),
        }
    }

    /// A labeled set of the given size.
    pub fn with_label(size: usize, label: impl Into<String>) -> Self {
        assert!(size >= 1, "finite sets must be nonempty");
        Self {
            size,
            label: label.into(),
        }
    }

    /// Number of elements.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Display label; empty when unset.
    pub fn label(&self) -> &str {
        &self.label
    }
}

/// A total function between finite sets, tabulated on every domain element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    dom: FiniteSet,
    cod: FiniteSet,
    image: Vec<usize>,
}

impl FunctionTable {
    /// Builds a table after checking totality.
    pub fn new(dom: FiniteSet, cod: FiniteSet, image: Vec<usize>) -> Result<Self, SetAlgError> {
        if image.len() != dom.size() {
            return Err(SetAlgError::BadImageCount {
                dom: dom.size(),
                got: image.len(),
            });
        }
        for (position, &value) in image.iter().enumerate() {
            if value >= cod.size() {
                return Err(SetAlgError::ImageOutOfRange {
                    position,
                    value,
                    cod: cod.size(),
                });
            }
        }
        Ok(Self { dom, cod, image })
    }

    /// Builds a table from an image list into a codomain of the given size,
    /// with unlabeled sets.
    pub fn from_images(image: Vec<usize>, cod_size: usize) -> Result<Self, SetAlgError> {
        let dom = FiniteSet::new(image.len().max(1));
        if image.is_empty() {
            return Err(SetAlgError::BadImageCount { dom: 1, got: 0 });
        }
        Self::new(dom, FiniteSet::new(cod_size), image)
    }

    /// The identity function on a set.
    pub fn identity(s: &FiniteSet) -> Self {
        Self {
            dom: s.clone(),
            cod: s.clone(),
            image: (0..s.size()).collect(),
        }
    }

    /// The constant function at `value`.
    pub fn constant(dom: &FiniteSet, cod: &FiniteSet, value: usize) -> Result<Self, SetAlgError> {
        Self::new(dom.clone(), cod.clone(), vec![value; dom.size()])
    }

    /// Domain set.
    pub fn dom(&self) -> &FiniteSet {
        &self.dom
    }

    /// Codomain set.
    pub fn cod(&self) -> &FiniteSet {
        &self.cod
    }

    /// The image of element `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    /// The full image list.
    pub fn images(&self) -> &[usize] {
        &self.image
    }

    /// Composition `self` after `inner`. Sets match by size.
    pub fn compose(&self, inner: &Self) -> Result<Self, SetAlgError> {
        if inner.cod.size() != self.dom.size() {
            return Err(SetAlgError::NotComposable {
                inner: inner.cod.size(),
                outer: self.dom.size(),
            });
        }
        Ok(Self {
            dom: inner.dom.clone(),
            cod: self.cod.clone(),
            image: inner.image.iter().map(|&i| self.image[i]).collect(),
        })
    }

    /// Set-level injectivity: no two domain elements share an image.
    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        for &v in &self.image {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }

    /// Preimage count of every codomain element.
    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut fibers = vec![0usize; self.cod.size()];
        for &v in &self.image {
            fibers[v] += 1;
        }
        fibers
    }
}

/// The multiplication of the classical structure on `s`: compares basis
/// labels, `|i> (x) |j| -> delta_ij |i>`. Shape `|S| x |S|^2`.
pub fn multiply<T: Scalar>(s: &FiniteSet) -> LinearMap<T> {
    let n = s.size();
    LinearMap::from_fn(n, n * n, |r, c| {
        if c == r * n + r {
            Complex::one()
        } else {
            Complex::zero()
        }
    })
}

/// The unit of the classical structure on `s`: the unnormalized all-ones
/// state.
pub fn unit<T: Scalar>(s: &FiniteSet) -> LinearMap<T> {
    LinearMap::from_fn(s.size(), 1, |_, _| Complex::one())
}

/// Copying map `|i> -> |i> (x) |i>`, the adjoint of [`multiply`].
pub fn copy<T: Scalar>(s: &FiniteSet) -> LinearMap<T> {
    multiply::<T>(s).adjoint()
}

/// Deleting effect `|i> -> 1`, the adjoint of [`unit`].
pub fn delete<T: Scalar>(s: &FiniteSet) -> LinearMap<T> {
    unit::<T>(s).adjoint()
}

/// One verified equation: whether it held at the tolerance, and the
/// residual (largest entrywise deviation) actually observed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawCheck<T> {
    pub holds: bool,
    pub residual: T,
}

impl<T: Scalar> LawCheck<T> {
    fn from_diff(lhs: &LinearMap<T>, rhs: &LinearMap<T>, tol: T) -> Self {
        match lhs.max_abs_diff(rhs) {
            Ok(residual) => Self {
                holds: residual <= tol,
                residual,
            },
            Err(_) => Self {
                holds: false,
                residual: T::infinity(),
            },
        }
    }
}

/// Outcome of checking a candidate (multiplication, unit) pair against the
/// classical-structure axioms.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalStructureReport<T> {
    pub associativity: LawCheck<T>,
    pub left_unit: LawCheck<T>,
    pub right_unit: LawCheck<T>,
    pub commutativity: LawCheck<T>,
    pub specialness: LawCheck<T>,
    /// Left Frobenius form against the middle form.
    pub frobenius_left: LawCheck<T>,
    /// Right Frobenius form against the middle form.
    pub frobenius_right: LawCheck<T>,
}

impl<T: Scalar> ClassicalStructureReport<T> {
    /// True when every axiom held.
    pub fn all_pass(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.holds)
    }

    /// Named view of every check, in a fixed order.
    pub fn checks(&self) -> Vec<(&'static str, LawCheck<T>)> {
        vec![
            ("associativity", self.associativity),
            ("left-unit", self.left_unit),
            ("right-unit", self.right_unit),
            ("commutativity", self.commutativity),
            ("specialness", self.specialness),
            ("frobenius-left", self.frobenius_left),
            ("frobenius-right", self.frobenius_right),
        ]
    }
}

/// Numerically checks the classical-structure axioms for a candidate
/// multiplication `m: S (x) S -> S` and unit `u: I -> S`.
///
/// The Frobenius law is checked in both displayed forms against the middle
/// composite `m-dagger after m`.
pub fn verify_classical_structure<T: Scalar>(
    m: &LinearMap<T>,
    u: &LinearMap<T>,
    tol: T,
) -> Result<ClassicalStructureReport<T>, SetAlgError> {
    let n = m.cod();
    if m.dom() != n * n || u.cod() != n || u.dom() != 1 {
        return Err(SetAlgError::NotAlgebraShaped {
            m_cod: m.cod(),
            m_dom: m.dom(),
            u_cod: u.cod(),
            u_dom: u.dom(),
        });
    }
    let id = LinearMap::identity(n);
    let m_dag = m.adjoint();

    let assoc_l = m.compose(&m.tensor(&id)).expect("shape");
    let assoc_r = m.compose(&id.tensor(m)).expect("shape");

    let left_unit = m.compose(&u.tensor(&id)).expect("shape");
    let right_unit = m.compose(&id.tensor(u)).expect("shape");

    let commuted = m.compose(&LinearMap::swap(n, n)).expect("shape");

    let special = m.compose(&m_dag).expect("shape");

    let frob_mid = m_dag.compose(m).expect("shape");
    let frob_left = id.tensor(m).compose(&m_dag.tensor(&id)).expect("shape");
    let frob_right = m.tensor(&id).compose(&id.tensor(&m_dag)).expect("shape");

    Ok(ClassicalStructureReport {
        associativity: LawCheck::from_diff(&assoc_l, &assoc_r, tol),
        left_unit: LawCheck::from_diff(&left_unit, &id, tol),
        right_unit: LawCheck::from_diff(&right_unit, &id, tol),
        commutativity: LawCheck::from_diff(&commuted, m, tol),
        specialness: LawCheck::from_diff(&special, &id, tol),
        frobenius_left: LawCheck::from_diff(&frob_left, &frob_mid, tol),
        frobenius_right: LawCheck::from_diff(&frob_right, &frob_mid, tol),
    })
}

/// The canonical spider with the given leg counts on the set `s`:
/// `sum_i |i>^(x)outputs <i|^(x)inputs`. With no legs at all this is the
/// scalar `|S|`.
pub fn spider<T: Scalar>(s: &FiniteSet, inputs: usize, outputs: usize) -> LinearMap<T> {
    let n = s.size();
    let dim = |legs: usize| n.pow(legs as u32);
    let diag_index = |i: usize, legs: usize| (0..legs).fold(0, |acc, _| acc * n + i);
    let mut entries: Vec<Complex<T>> = vec![Complex::zero(); dim(outputs) * dim(inputs)];
    for i in 0..n {
        let r = diag_index(i, outputs);
        let c = diag_index(i, inputs);
        entries[r * dim(inputs) + c] += Complex::one();
    }
    LinearMap::new(dim(outputs), dim(inputs), entries).expect("spider shape")
}

/// One catalog composite of the classical-structure generators, tagged
/// with its wire connectivity (every entry is a single connected
/// component, so the leg counts determine it).
#[derive(Debug, Clone)]
pub struct SpiderComposite<T> {
    pub label: &'static str,
    pub inputs: usize,
    pub outputs: usize,
    pub map: LinearMap<T>,
}

/// A fixed catalog of ten connected composites of `{m, u, m-dagger,
/// u-dagger}`. Composites with equal leg counts (hence equal
/// connectivity) must evaluate to equal maps; all of them must equal the
/// canonical [`spider`] of their arity.
pub fn spider_catalog<T: Scalar>(s: &FiniteSet) -> Vec<SpiderComposite<T>> {
    let n = s.size();
    let id = LinearMap::identity(n);
    let m = multiply::<T>(s);
    let u = unit::<T>(s);
    let m_dag = m.adjoint();
    let u_dag = u.adjoint();
    let entry = |label, inputs, outputs, map| SpiderComposite {
        label,
        inputs,
        outputs,
        map,
    };
    vec![
        entry("m", 2, 1, m.clone()),
        entry(
            "m/(m-x-id)",
            3,
            1,
            m.compose(&m.tensor(&id)).expect("shape"),
        ),
        entry(
            "m/(id-x-m)",
            3,
            1,
            m.compose(&id.tensor(&m)).expect("shape"),
        ),
        entry(
            "m/swap",
            2,
            1,
            m.compose(&LinearMap::swap(n, n)).expect("shape"),
        ),
        entry("mdag/m", 2, 2, m_dag.compose(&m).expect("shape")),
        entry(
            "(id-x-m)/(mdag-x-id)",
            2,
            2,
            id.tensor(&m).compose(&m_dag.tensor(&id)).expect("shape"),
        ),
        entry(
            "(m-x-id)/(id-x-mdag)",
            2,
            2,
            m.tensor(&id).compose(&id.tensor(&m_dag)).expect("shape"),
        ),
        entry("m/mdag", 1, 1, m.compose(&m_dag).expect("shape")),
        entry("m/(u-x-id)", 1, 1, m.compose(&u.tensor(&id)).expect("shape")),
        entry("udag/m", 2, 0, u_dag.compose(&m).expect("shape")),
    ]
}

/// Checks every catalog composite against the canonical spider of its
/// arity, which makes any two composites with equal connectivity equal to
/// each other as well.
pub fn verify_spider_catalog<T: Scalar>(
    s: &FiniteSet,
    tol: T,
) -> Vec<(&'static str, LawCheck<T>)> {
    spider_catalog::<T>(s)
        .into_iter()
        .map(|c| {
            let canonical = spider::<T>(s, c.inputs, c.outputs);
            (c.label, LawCheck::from_diff(&c.map, &canonical, tol))
        })
        .collect()
}

/// The linear extension of a set function: columns are codomain basis
/// vectors.
pub fn linearize<T: Scalar>(f: &FunctionTable) -> LinearMap<T> {
    LinearMap::from_fn(f.cod().size(), f.dom().size(), |r, c| {
        if f.apply(c) == r {
            Complex::one()
        } else {
            Complex::zero()
        }
    })
}

/// Whether a linear map commutes with copying and deleting, the two
/// comonoid homomorphism conditions. Exactly the linearizations of set
/// functions satisfy both.
pub fn is_comonoid_homomorphism<T: Scalar>(
    f: &LinearMap<T>,
    dom: &FiniteSet,
    cod: &FiniteSet,
    tol: T,
) -> Result<bool, SetAlgError> {
    if f.dom() != dom.size() || f.cod() != cod.size() {
        return Err(SetAlgError::WrongShape {
            cod: f.cod(),
            dom: f.dom(),
            expected_dom: dom.size(),
            expected_cod: cod.size(),
        });
    }
    let copies = copy::<T>(cod).compose(f).expect("shape");
    let copied = f.tensor(f).compose(&copy::<T>(dom)).expect("shape");
    let deletes = delete::<T>(cod).compose(f).expect("shape");
    Ok(copies.approx_eq(&copied, tol) && deletes.approx_eq(&delete::<T>(dom), tol))
}

/// Whether the linearization of `f` is an isometry, which holds exactly
/// when `f` is injective.
pub fn is_injective_as_isometry<T: Scalar>(f: &FunctionTable, tol: T) -> bool {
    let lf = linearize::<T>(f);
    let gram = lf.adjoint().compose(&lf).expect("shape");
    gram.approx_eq(&LinearMap::identity(f.dom().size()), tol)
}

/// If every codomain element of `f` has the same number `n` of preimages,
/// returns `n`; the linearization then sends the domain unit to `n` times
/// the codomain unit.
pub fn even_surjectivity_multiplicity(f: &FunctionTable) -> Option<usize> {
    let fibers = f.fiber_sizes();
    let first = fibers[0];
    if first > 0 && fibers.iter().all(|&k| k == first) {
        Some(first)
    } else {
        None
    }
}
