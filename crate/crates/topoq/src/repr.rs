//! Unitary representations of finite groups: numerical decomposition of
//! the regular representation into irreducibles, the measurement
//! isometries they induce, the normalization and reconstruction
//! identities that make them usable as diagram vertices, and projector
//! states in the group algebra.
//!
//! No character tables are hard-coded. The irreducibles are found by
//! averaging a seeded random Hermitian matrix over the group action,
//! splitting along the eigenspaces of the result, and recursing until
//! every block's character certifies irreducibility. Everything is then
//! validated a posteriori, so a returned set is correct regardless of how
//! the randomness fell.

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use thiserror::Error;

use crate::eigen::{self, EigenError};
use crate::groupalg::{FiniteGroup, GroupError, QuotientData, Subgroup};
use crate::linalg::LinearMap;
use crate::scalar::Scalar;

/// Errors from representation construction and verification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReprError {
    /// A representation needs one matrix per group element.
    #[error("expected {expected} matrices, got {got}")]
    WrongMatrixCount { expected: usize, got: usize },

    /// All matrices must be square of one shared dimension.
    #[error("matrix for element {element} is {cod}x{dom}, expected {dim}x{dim}")]
    WrongMatrixShape {
        element: usize,
        cod: usize,
        dom: usize,
        dim: usize,
    },

    /// The identity element must map to the identity matrix.
    #[error("matrix at the identity deviates from the identity by {residual}")]
    NotUnital { residual: f64 },

    /// The matrices fail to respect the group multiplication.
    #[error("matrices break the homomorphism law at ({a}, {b}) with residual {residual}")]
    NotHomomorphism { a: usize, b: usize, residual: f64 },

    /// A representation matrix is not unitary.
    #[error("matrix for element {element} deviates from unitarity by {residual}")]
    NotUnitary { element: usize, residual: f64 },

    /// The randomized splitting failed to separate a reducible block.
    #[error("irreducible decomposition did not converge for seed {seed}; retry with another seed")]
    DecompositionFailed { seed: u64 },

    /// A complete set of irreducibles must satisfy the dimension count.
    #[error("irrep dimensions square-sum to {sum_of_squares}, group order is {order}")]
    IncompleteIrreps { sum_of_squares: usize, order: usize },

    /// The subgroup sum matched neither of the two possible values.
    #[error(
        "subgroup sum is neither a scaled identity (residual {to_identity}) nor zero (residual {to_zero})"
    )]
    Inconsistent { to_identity: f64, to_zero: f64 },

    /// A projector family with no nonzero member selects nothing.
    #[error("every projector in the family is zero")]
    AllProjectorsZero,

    /// A projector family entry is not an orthogonal projector.
    #[error("matrix for irrep {index} is not Hermitian idempotent (residual {residual})")]
    NonProjector { index: usize, residual: f64 },

    /// Coefficients were supplied but do not fit the projector family.
    #[error("bad coefficients: {detail}")]
    BadCoefficients { detail: String },

    /// An eigensolver failure bubbled up.
    #[error(transparent)]
    Eigen(#[from] EigenError),

    /// A group-level failure bubbled up.
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A unitary representation: one unitary matrix per group element,
/// respecting the multiplication table. Validated on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation<T> {
    group: FiniteGroup,
    dim: usize,
    matrices: Vec<LinearMap<T>>,
}

impl<T: Scalar> Representation<T> {
    /// Validates the homomorphism, unitality, and unitarity laws at the
    /// given tolerance and wraps the matrices up.
    pub fn new(
        group: FiniteGroup,
        matrices: Vec<LinearMap<T>>,
        tol: T,
    ) -> Result<Self, ReprError> {
        let order = group.order();
        if matrices.len() != order {
            return Err(ReprError::WrongMatrixCount {
                expected: order,
                got: matrices.len(),
            });
        }
        let dim = matrices[0].cod();
        for (element, m) in matrices.iter().enumerate() {
            if m.cod() != dim || m.dom() != dim {
                return Err(ReprError::WrongMatrixShape {
                    element,
                    cod: m.cod(),
                    dom: m.dom(),
                    dim,
                });
            }
        }
        let id = LinearMap::identity(dim);
        let unital = matrices[0].max_abs_diff(&id).expect("same shape");
        if unital > tol {
            return Err(ReprError::NotUnital {
                residual: unital.to_f64().unwrap_or(f64::NAN),
            });
        }
        for (element, m) in matrices.iter().enumerate() {
            let gram = m.adjoint().compose(m).expect("square");
            let residual = gram.max_abs_diff(&id).expect("same shape");
            if residual > tol {
                return Err(ReprError::NotUnitary {
                    element,
                    residual: residual.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        for a in 0..order {
            for b in 0..order {
                let product = matrices[a].compose(&matrices[b]).expect("square");
                let residual = product
                    .max_abs_diff(&matrices[group.mul(a, b)])
                    .expect("same shape");
                if residual > tol {
                    return Err(ReprError::NotHomomorphism {
                        a,
                        b,
                        residual: residual.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
        }
        Ok(Self {
            group,
            dim,
            matrices,
        })
    }

    /// The one-dimensional representation sending everything to 1.
    pub fn trivial(group: FiniteGroup) -> Self {
        let matrices = vec![LinearMap::identity(1); group.order()];
        Self {
            group,
            dim: 1,
            matrices,
        }
    }

    /// The group being represented.
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The matrix for one element.
    pub fn matrix(&self, g: usize) -> &LinearMap<T> {
        &self.matrices[g]
    }

    /// The character, one trace per group element.
    pub fn character(&self) -> Vec<Complex<T>> {
        self.matrices
            .iter()
            .map(|m| m.trace().expect("square"))
            .collect()
    }

    /// Character self-inner-product test: a representation is irreducible
    /// exactly when the sum of its squared character moduli equals the
    /// group order.
    pub fn is_irreducible(&self, tol: T) -> bool {
        let sum: T = self
            .character()
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |acc, x| acc + x);
        (sum - T::from_usize_lossy(self.group.order())).abs()
            <= tol * T::from_usize_lossy(self.group.order())
    }
}

/// The left regular representation: element `g` acts by the permutation
/// matrix of left multiplication, `|h> -> |g h>`. Exact, no rounding.
pub fn regular_representation<T: Scalar>(group: &FiniteGroup) -> Representation<T> {
    let order = group.order();
    let matrices: Vec<LinearMap<T>> = (0..order)
        .map(|g| {
            LinearMap::from_fn(order, order, |r, c| {
                if group.mul(g, c) == r {
                    Complex::one()
                } else {
                    Complex::zero()
                }
            })
        })
        .collect();
    Representation::new(group.clone(), matrices, T::zero())
        .expect("permutation matrices are an exact representation")
}

/// One representative of every equivalence class of irreducible
/// representation, in the canonical order: dimension ascending, then
/// character entries compared position by position with the larger
/// (real, imaginary) pair first, which puts the trivial representation
/// at index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct IrrepSet<T> {
    group: FiniteGroup,
    irreps: Vec<Representation<T>>,
}

impl<T: Scalar> IrrepSet<T> {
    /// Wraps a list of irreducibles after checking the completeness count
    /// `sum of dim^2 == |G|`.
    pub fn new(group: FiniteGroup, irreps: Vec<Representation<T>>) -> Result<Self, ReprError> {
        let sum_of_squares: usize = irreps.iter().map(|r| r.dim() * r.dim()).sum();
        if sum_of_squares != group.order() {
            return Err(ReprError::IncompleteIrreps {
                sum_of_squares,
                order: group.order(),
            });
        }
        Ok(Self { group, irreps })
    }

    /// The group.
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// The irreducibles in canonical order.
    pub fn irreps(&self) -> &[Representation<T>] {
        &self.irreps
    }

    /// Number of equivalence classes.
    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    /// True for the degenerate case of no irreps, which [`Self::new`]
    /// only admits for no group at all; present to satisfy the usual
    /// pairing with `len`.
    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    /// Dimensions in canonical order.
    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(|r| r.dim()).collect()
    }

    /// Serializable snapshot with all entries lowered to double
    /// precision.
    pub fn to_json(&self) -> IrrepSetJson {
        let lower = |z: &Complex<T>| {
            [
                z.re.to_f64().unwrap_or(f64::NAN),
                z.im.to_f64().unwrap_or(f64::NAN),
            ]
        };
        IrrepSetJson {
            order: self.group.order(),
            irreps: self
                .irreps
                .iter()
                .map(|rep| IrrepJson {
                    dim: rep.dim(),
                    character: rep.character().iter().map(lower).collect(),
                    matrices: (0..self.group.order())
                        .map(|g| rep.matrix(g).entries().iter().map(lower).collect())
                        .collect(),
                })
                .collect(),
        }
    }
}

/// JSON form of an irrep set: complex numbers as `[re, im]` pairs,
/// matrices flattened row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrrepSetJson {
    pub order: usize,
    pub irreps: Vec<IrrepJson>,
}

/// JSON form of a single irreducible representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrrepJson {
    pub dim: usize,
    pub character: Vec<[f64; 2]>,
    pub matrices: Vec<Vec<[f64; 2]>>,
}

const SPLIT_RETRIES: usize = 10;

/// Computes one representative of every irreducible representation class
/// by recursively splitting the regular representation. Deterministic for
/// a fixed seed; different seeds may return different (equivalent) bases
/// for the higher-dimensional classes.
pub fn compute_irreps<T: Scalar>(
    group: &FiniteGroup,
    seed: u64,
) -> Result<IrrepSet<T>, ReprError> {
    let order = group.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reg = regular_representation::<T>(group);
    // Tolerance for the structural decisions (irreducibility, eigenvalue
    // clustering, character deduplication): far above roundoff, far below
    // the actual gaps these quantities exhibit.
    let rel = T::from_f64_lossy(1e-6).max(T::default_tol());

    let mut blocks: Vec<Vec<LinearMap<T>>> = Vec::new();
    let mut stack: Vec<LinearMap<T>> = vec![LinearMap::identity(order)];
    while let Some(basis) = stack.pop() {
        let restricted: Vec<LinearMap<T>> = (0..order)
            .map(|g| {
                basis
                    .adjoint()
                    .compose(reg.matrix(g))
                    .and_then(|m| m.compose(&basis))
                    .expect("conforming shapes")
            })
            .collect();
        let char_norm_sq: T = restricted
            .iter()
            .map(|m| m.trace().expect("square").norm_sqr())
            .fold(T::zero(), |acc, x| acc + x);
        let order_t = T::from_usize_lossy(order);
        if (char_norm_sq - order_t).abs() <= rel * order_t {
            blocks.push(restricted);
            continue;
        }
        let dim = basis.dom();
        let mut split = false;
        for _ in 0..SPLIT_RETRIES {
            let averaged = group_average(&restricted, random_hermitian::<T>(&mut rng, dim));
            let eig = eigen::hermitian_eigen(&averaged, T::strict_tol())?;
            let clusters = cluster_eigenvalues(&eig.values, rel);
            if clusters.len() < 2 {
                continue;
            }
            for (start, end) in clusters {
                let sub = LinearMap::from_fn(dim, end - start, |r, c| {
                    eig.vectors.entry(r, start + c)
                });
                stack.push(basis.compose(&sub).expect("conforming shapes"));
            }
            split = true;
            break;
        }
        if !split {
            return Err(ReprError::DecompositionFailed { seed });
        }
    }

    // One representative per character class.
    let mut kept: Vec<(Vec<Complex<T>>, Vec<LinearMap<T>>)> = Vec::new();
    for block in blocks {
        let chi: Vec<Complex<T>> = block.iter().map(|m| m.trace().expect("square")).collect();
        let known = kept.iter().any(|(seen, _)| {
            seen.iter()
                .zip(&chi)
                .all(|(a, b)| (*a - *b).norm() <= rel * T::from_usize_lossy(order))
        });
        if !known {
            kept.push((chi, block));
        }
    }

    let mut irreps = Vec::with_capacity(kept.len());
    for (_, block) in kept {
        let dim = block[0].cod();
        let mut matrices = Vec::with_capacity(order);
        for (g, m) in block.into_iter().enumerate() {
            if g == 0 {
                matrices.push(LinearMap::identity(dim));
            } else {
                matrices.push(eigen::unitarize(&m)?);
            }
        }
        irreps.push(Representation::new(
            group.clone(),
            matrices,
            T::default_tol(),
        )?);
    }

    irreps.sort_by(|a, b| canonical_irrep_order(a, b));
    let set = IrrepSet::new(group.clone(), irreps)
        .map_err(|_| ReprError::DecompositionFailed { seed })?;
    Ok(set)
}

fn random_hermitian<T: Scalar>(rng: &mut ChaCha8Rng, dim: usize) -> LinearMap<T> {
    let mut draw = || T::from_f64_lossy(rng.random::<f64>() * 2.0 - 1.0);
    let mut entries = vec![Complex::zero(); dim * dim];
    for r in 0..dim {
        entries[r * dim + r] = Complex::new(draw(), T::zero());
        for c in (r + 1)..dim {
            let z = Complex::new(draw(), draw());
            entries[r * dim + c] = z;
            entries[c * dim + r] = z.conj();
        }
    }
    LinearMap::new(dim, dim, entries).expect("shape by construction")
}

fn group_average<T: Scalar>(action: &[LinearMap<T>], h: LinearMap<T>) -> LinearMap<T> {
    let dim = h.cod();
    let mut sum = LinearMap::zeros(dim, dim);
    for m in action {
        let conjugated = m
            .compose(&h)
            .and_then(|x| x.compose(&m.adjoint()))
            .expect("square");
        sum = sum.add(&conjugated).expect("same shape");
    }
    sum.scale_re(T::one() / T::from_usize_lossy(action.len()))
}

/// Groups ascending eigenvalues into clusters separated by gaps larger
/// than `rel` times the total spread. Returns half-open index ranges.
fn cluster_eigenvalues<T: Scalar>(values: &[T], rel: T) -> Vec<(usize, usize)> {
    let n = values.len();
    let spread = values[n - 1] - values[0];
    if spread <= T::strict_tol() * T::from_usize_lossy(n) {
        return vec![(0, n)];
    }
    let threshold = spread * rel;
    let mut ranges = Vec::new();
    let mut start = 0;
    for i in 1..n {
        if values[i] - values[i - 1] > threshold {
            ranges.push((start, i));
            start = i;
        }
    }
    ranges.push((start, n));
    ranges
}

fn canonical_irrep_order<T: Scalar>(a: &Representation<T>, b: &Representation<T>) -> Ordering {
    match a.dim().cmp(&b.dim()) {
        Ordering::Equal => {}
        other => return other,
    }
    let snap = T::from_f64_lossy(1e-6);
    for (x, y) in a.character().iter().zip(b.character().iter()) {
        if (x.re - y.re).abs() > snap {
            // Larger real part first.
            return y.re.partial_cmp(&x.re).expect("finite");
        }
        if (x.im - y.im).abs() > snap {
            // Larger imaginary part first.
            return y.im.partial_cmp(&x.im).expect("finite");
        }
    }
    Ordering::Equal
}

/// A representation flattened to a single linear map `|G| -> n^2`:
/// column `g` is the vectorized matrix for `g`.
pub fn rep_as_linear_map<T: Scalar>(rho: &Representation<T>) -> LinearMap<T> {
    let order = rho.group().order();
    let n = rho.dim();
    LinearMap::from_fn(n * n, order, |r, g| {
        rho.matrix(g).entry(r / n, r % n)
    })
}

/// The measurement branch for one irreducible class: the flattened
/// representation rescaled by `sqrt(dim / |G|)`, which makes it a
/// coisometry onto the matrix block.
pub fn measurement_isometry<T: Scalar>(rho: &Representation<T>) -> LinearMap<T> {
    let scale = (T::from_usize_lossy(rho.dim()) / T::from_usize_lossy(rho.group().order())).sqrt();
    rep_as_linear_map(rho).scale_re(scale)
}

/// Largest deviation in the normalization identity for an irreducible
/// representation: the flattened map composed with its adjoint, against
/// `|G|/n` times the identity on the matrix block.
pub fn repnorm_residual<T: Scalar>(rho: &Representation<T>) -> T {
    let r = rep_as_linear_map(rho);
    let lhs = r.compose(&r.adjoint()).expect("conforming shapes");
    let scale = T::from_usize_lossy(rho.group().order()) / T::from_usize_lossy(rho.dim());
    let rhs = LinearMap::identity(rho.dim() * rho.dim()).scale_re(scale);
    lhs.max_abs_diff(&rhs).expect("same shape")
}

/// Whether the normalization identity holds within `tol`.
pub fn verify_repnorm<T: Scalar>(rho: &Representation<T>, tol: T) -> bool {
    repnorm_residual(rho) <= tol
}

/// Largest deviation from completeness of the projective measurement:
/// the branch isometries must sum to the identity on the group algebra,
/// `sum of V-dagger V == id`.
pub fn measurement_completeness_residual<T: Scalar>(
    group: &FiniteGroup,
    reps: &[Representation<T>],
) -> Result<T, ReprError> {
    check_complete(group, reps)?;
    let order = group.order();
    let mut sum = LinearMap::zeros(order, order);
    for rho in reps {
        let v = measurement_isometry(rho);
        sum = sum
            .add(&v.adjoint().compose(&v).expect("conforming shapes"))
            .expect("same shape");
    }
    Ok(sum.max_abs_diff(&LinearMap::identity(order)).expect("same shape"))
}

/// Whether the measurement completeness identity holds within `tol`.
pub fn verify_measurement_completeness<T: Scalar>(
    group: &FiniteGroup,
    reps: &[Representation<T>],
    tol: T,
) -> Result<bool, ReprError> {
    Ok(measurement_completeness_residual(group, reps)? <= tol)
}

/// Largest deviation in the reconstruction of the multiplication vertex
/// from a complete set of irreducibles: `m == (1/|G|) sum over rho of
/// dim(rho) * rho-dagger after block-multiplication after (rho (x) rho)`.
pub fn mdecomp_residual<T: Scalar>(
    group: &FiniteGroup,
    reps: &[Representation<T>],
) -> Result<T, ReprError> {
    check_complete(group, reps)?;
    let order = group.order();
    let mut sum = LinearMap::zeros(order, order * order);
    for rho in reps {
        let r = rep_as_linear_map(rho);
        let comp = LinearMap::comp(rho.dim());
        let term = r
            .adjoint()
            .compose(&comp)
            .and_then(|x| x.compose(&r.tensor(&r)))
            .expect("conforming shapes");
        sum = sum
            .add(&term.scale_re(T::from_usize_lossy(rho.dim())))
            .expect("same shape");
    }
    let rhs = sum.scale_re(T::one() / T::from_usize_lossy(order));
    let m = crate::groupalg::group_multiplication_map::<T>(group);
    Ok(m.max_abs_diff(&rhs).expect("same shape"))
}

/// Whether the multiplication reconstruction identity holds within `tol`.
pub fn verify_mdecomp<T: Scalar>(
    group: &FiniteGroup,
    reps: &[Representation<T>],
    tol: T,
) -> Result<bool, ReprError> {
    Ok(mdecomp_residual(group, reps)? <= tol)
}

fn check_complete<T: Scalar>(
    group: &FiniteGroup,
    reps: &[Representation<T>],
) -> Result<(), ReprError> {
    let sum_of_squares: usize = reps.iter().map(|r| r.dim() * r.dim()).sum();
    if sum_of_squares != group.order() {
        return Err(ReprError::IncompleteIrreps {
            sum_of_squares,
            order: group.order(),
        });
    }
    Ok(())
}

/// Largest deviation in the vertex-sliding identity for an irreducible
/// representation: the adjoint flattened map pulls through the
/// multiplication vertex on either leg, turning group multiplication
/// into matrix multiplication against the carried block. Reports the
/// worse of the two leg versions.
pub fn copy_on_leg_residual<T: Scalar>(sigma: &Representation<T>) -> T {
    let group = sigma.group();
    let order = group.order();
    let n2 = sigma.dim() * sigma.dim();
    let m = crate::groupalg::group_multiplication_map::<T>(group);
    let r = rep_as_linear_map(sigma);
    let r_dag = r.adjoint();
    let comp = LinearMap::comp(sigma.dim());
    let id_g = LinearMap::identity(order);
    let id_b = LinearMap::identity(n2);

    // Carried block on the right leg.
    let lhs = m.compose(&id_g.tensor(&r_dag)).expect("conforming shapes");
    let rhs = r_dag
        .compose(&comp)
        .and_then(|x| x.compose(&r.tensor(&id_b)))
        .expect("conforming shapes");
    let right_leg = lhs.max_abs_diff(&rhs).expect("same shape");

    // Carried block on the left leg.
    let lhs = m.compose(&r_dag.tensor(&id_g)).expect("conforming shapes");
    let rhs = r_dag
        .compose(&comp)
        .and_then(|x| x.compose(&id_b.tensor(&r)))
        .expect("conforming shapes");
    right_leg.max(lhs.max_abs_diff(&rhs).expect("same shape"))
}

/// Whether both leg versions of the vertex-sliding identity hold within
/// `tol`.
pub fn verify_copy_on_leg<T: Scalar>(sigma: &Representation<T>, tol: T) -> bool {
    copy_on_leg_residual(sigma) <= tol
}

/// How an irreducible representation relates to a normal subgroup:
/// either it factors through the quotient, or the subgroup averages it
/// to zero. Exactly one of the two happens.
#[derive(Debug, Clone)]
pub enum SubgroupAction<T> {
    /// The subgroup lies in the kernel; the representation descends to
    /// the quotient.
    FactorsThrough {
        induced: Representation<T>,
        quotient: QuotientData,
        /// Largest deviation of the factored composite from the original.
        residual: T,
    },
    /// Summing the representation over the subgroup gives zero.
    Annihilated {
        /// Largest entry of the full pairing sum with the quotient
        /// action, which vanishes in this arm.
        pairing_residual: T,
    },
}

/// Decides which side of the dichotomy an irreducible representation
/// falls on for a normal subgroup, and verifies the corresponding
/// factorization or annihilation identity.
pub fn classify_irrep_vs_normal_subgroup<T: Scalar>(
    rho: &Representation<T>,
    h: &Subgroup,
    tol: T,
) -> Result<SubgroupAction<T>, ReprError> {
    let data = h.quotient()?;
    let group = rho.group();
    let n = rho.dim();
    let mut subgroup_sum = LinearMap::zeros(n, n);
    for &member in h.members() {
        subgroup_sum = subgroup_sum.add(rho.matrix(member)).expect("same shape");
    }
    let h_order = T::from_usize_lossy(h.order());
    let scaled_id = LinearMap::identity(n).scale_re(h_order);
    let to_identity = subgroup_sum.max_abs_diff(&scaled_id).expect("same shape");
    let to_zero = subgroup_sum.max_abs();
    let scale = h_order.max(T::one());

    if to_identity <= tol * scale {
        let q = &data.quotient;
        let matrices: Vec<LinearMap<T>> = data
            .cosets
            .iter()
            .map(|coset| rho.matrix(coset[0]).clone())
            .collect();
        let induced = Representation::new(q.clone(), matrices, tol * scale)?;
        let mut residual = T::zero();
        for g in 0..group.order() {
            let diff = induced
                .matrix(data.projection.apply(g))
                .max_abs_diff(rho.matrix(g))
                .expect("same shape");
            residual = residual.max(diff);
        }
        if residual > tol * scale {
            return Err(ReprError::Inconsistent {
                to_identity: to_identity.to_f64().unwrap_or(f64::NAN),
                to_zero: to_zero.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(SubgroupAction::FactorsThrough {
            induced,
            quotient: data,
            residual,
        })
    } else if to_zero <= tol * scale {
        let reg_q = regular_representation::<T>(&data.quotient);
        let k = data.quotient.order();
        let mut pairing = LinearMap::zeros(n * k, n * k);
        for g in 0..group.order() {
            let term = rho
                .matrix(g)
                .tensor(reg_q.matrix(data.projection.apply(g)));
            pairing = pairing.add(&term).expect("same shape");
        }
        let pairing_residual = pairing.max_abs();
        if pairing_residual > tol * T::from_usize_lossy(group.order()) {
            return Err(ReprError::Inconsistent {
                to_identity: to_identity.to_f64().unwrap_or(f64::NAN),
                to_zero: to_zero.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(SubgroupAction::Annihilated { pairing_residual })
    } else {
        Err(ReprError::Inconsistent {
            to_identity: to_identity.to_f64().unwrap_or(f64::NAN),
            to_zero: to_zero.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// One projector per irreducible class, aligned with an [`IrrepSet`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorFamily<T> {
    matrices: Vec<LinearMap<T>>,
}

impl<T: Scalar> ProjectorFamily<T> {
    /// Identity projector on one chosen class, zero on the rest.
    pub fn single(irreps: &IrrepSet<T>, index: usize) -> Result<Self, ReprError> {
        if index >= irreps.len() {
            return Err(ReprError::BadCoefficients {
                detail: format!(
                    "irrep index {index} out of range for {} classes",
                    irreps.len()
                ),
            });
        }
        let matrices = irreps
            .irreps()
            .iter()
            .enumerate()
            .map(|(i, rep)| {
                if i == index {
                    LinearMap::identity(rep.dim())
                } else {
                    LinearMap::zeros(rep.dim(), rep.dim())
                }
            })
            .collect();
        Ok(Self { matrices })
    }

    /// Identity projector on every class.
    pub fn all_identity(irreps: &IrrepSet<T>) -> Self {
        Self {
            matrices: irreps
                .irreps()
                .iter()
                .map(|rep| LinearMap::identity(rep.dim()))
                .collect(),
        }
    }

    /// Wraps explicit matrices; validated against the irrep set by
    /// [`make_phi`].
    pub fn from_matrices(matrices: Vec<LinearMap<T>>) -> Self {
        Self { matrices }
    }

    /// The projectors in irrep order.
    pub fn matrices(&self) -> &[LinearMap<T>] {
        &self.matrices
    }

    /// Checks alignment with the irrep set, Hermitian idempotence of
    /// every member, and that at least one member is nonzero.
    pub fn validate(&self, irreps: &IrrepSet<T>, tol: T) -> Result<(), ReprError> {
        if self.matrices.len() != irreps.len() {
            return Err(ReprError::BadCoefficients {
                detail: format!(
                    "{} projectors for {} irrep classes",
                    self.matrices.len(),
                    irreps.len()
                ),
            });
        }
        let mut any_nonzero = false;
        for (index, (p, rep)) in self.matrices.iter().zip(irreps.irreps()).enumerate() {
            let n = rep.dim();
            if p.cod() != n || p.dom() != n {
                return Err(ReprError::WrongMatrixShape {
                    element: index,
                    cod: p.cod(),
                    dom: p.dom(),
                    dim: n,
                });
            }
            let hermitian = p.adjoint().max_abs_diff(p).expect("same shape");
            let idempotent = p
                .compose(p)
                .expect("square")
                .max_abs_diff(p)
                .expect("same shape");
            let residual = hermitian.max(idempotent);
            if residual > tol {
                return Err(ReprError::NonProjector {
                    index,
                    residual: residual.to_f64().unwrap_or(f64::NAN),
                });
            }
            if p.max_abs() > tol {
                any_nonzero = true;
            }
        }
        if !any_nonzero {
            return Err(ReprError::AllProjectorsZero);
        }
        Ok(())
    }
}

/// A state in the group algebra, one amplitude per group element.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupAlgebraState<T> {
    group: FiniteGroup,
    state: LinearMap<T>,
}

impl<T: Scalar> GroupAlgebraState<T> {
    /// The underlying group.
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// The state as a column map.
    pub fn state(&self) -> &LinearMap<T> {
        &self.state
    }

    /// The amplitudes in element order.
    pub fn amplitudes(&self) -> &[Complex<T>] {
        self.state.entries()
    }

    /// Euclidean norm.
    pub fn norm(&self) -> T {
        self.state.norm()
    }
}

/// Builds the unit-norm group-algebra state selecting the given
/// projectors: the weighted sum over classes of the adjoint flattened
/// representation applied to the vectorized projector.
///
/// Coefficients default to equal weight on every class with a nonzero
/// projector; explicit coefficients must be nonzero on exactly those
/// classes.
pub fn make_phi<T: Scalar>(
    irreps: &IrrepSet<T>,
    projectors: &ProjectorFamily<T>,
    coefficients: Option<&[Complex<T>]>,
) -> Result<GroupAlgebraState<T>, ReprError> {
    let tol = T::default_tol();
    projectors.validate(irreps, tol)?;
    let order = irreps.group().order();
    let supported: Vec<bool> = projectors
        .matrices()
        .iter()
        .map(|p| p.max_abs() > tol)
        .collect();
    let weights: Vec<Complex<T>> = match coefficients {
        Some(c) => {
            if c.len() != irreps.len() {
                return Err(ReprError::BadCoefficients {
                    detail: format!("{} coefficients for {} irrep classes", c.len(), irreps.len()),
                });
            }
            for (i, (z, &on)) in c.iter().zip(&supported).enumerate() {
                if on && z.norm() <= tol {
                    return Err(ReprError::BadCoefficients {
                        detail: format!("coefficient for supported irrep {i} is zero"),
                    });
                }
            }
            c.to_vec()
        }
        None => supported
            .iter()
            .map(|&on| {
                if on {
                    Complex::one()
                } else {
                    Complex::zero()
                }
            })
            .collect(),
    };
    let mut sum = LinearMap::zeros(order, 1);
    for ((rep, p), w) in irreps.irreps().iter().zip(projectors.matrices()).zip(&weights) {
        if w.norm() <= T::zero() {
            continue;
        }
        let named = p.name().expect("projectors are square");
        let term = rep_as_linear_map(rep)
            .adjoint()
            .compose(&named)
            .expect("conforming shapes");
        sum = sum.add(&term.scale(*w)).expect("same shape");
    }
    let norm = sum.norm();
    if norm <= tol {
        // Cannot happen for a validated family: distinct classes produce
        // orthogonal summands, so a nonzero projector forces a nonzero sum.
        return Err(ReprError::AllProjectorsZero);
    }
    Ok(GroupAlgebraState {
        group: irreps.group().clone(),
        state: sum.scale_re(T::one() / norm),
    })
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

    fn catalog() -> Vec<(&'static str, FiniteGroup)> {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        vec![
            ("Z2", z2.clone()),
            ("Z3", FiniteGroup::cyclic(3).unwrap()),
            ("Z4", FiniteGroup::cyclic(4).unwrap()),
            ("Z5", FiniteGroup::cyclic(5).unwrap()),
            ("Z6", FiniteGroup::cyclic(6).unwrap()),
            ("Z2xZ2", FiniteGroup::product(&z2, &z2).unwrap()),
            ("S3", FiniteGroup::symmetric(3).unwrap()),
            ("D4", FiniteGroup::dihedral(4).unwrap()),
            ("Q8", FiniteGroup::quaternion()),
        ]
    }

    #[test]
    fn regular_representation_of_z2_is_identity_and_swap() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let reg = regular_representation::<f64>(&z2);
        assert!(reg.matrix(0).approx_eq(&Map::identity(2), 0.0));
        let swap = Map::new(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(reg.matrix(1).approx_eq(&swap, 0.0));
    }

    #[test]
    fn regular_character_counts_fixed_points() {
        // Left multiplication by a non-identity element has no fixed
        // points, so the character is |G| at the identity and 0 elsewhere.
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let chi = regular_representation::<f64>(&s3).character();
        assert_eq!(chi[0], c(6.0, 0.0));
        for g in 1..6 {
            assert_eq!(chi[g], c(0.0, 0.0));
        }
    }

    #[test]
    fn representation_constructor_rejects_broken_input() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let id = Map::identity(2);
        assert!(matches!(
            Representation::new(z2.clone(), vec![id.clone()], 1e-9),
            Err(ReprError::WrongMatrixCount { expected: 2, got: 1 })
        ));
        // Identity paired with a non-unitary matrix.
        let bad = Map::new(2, 2, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(
            Representation::new(z2.clone(), vec![id.clone(), bad], 1e-9),
            Err(ReprError::NotUnitary { element: 1, .. })
        ));
        // Two identities break the homomorphism law for the cyclic group
        // of order two? No: that is the trivial action on a 2-dim space,
        // a perfectly valid (reducible) representation. Breaking the law
        // needs matrices[1]^2 != matrices[0].
        let quarter_turn = Map::new(
            2,
            2,
            vec![c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        assert!(matches!(
            Representation::new(z2, vec![id, quarter_turn], 1e-9),
            Err(ReprError::NotHomomorphism { .. })
        ));
    }

    #[test]
    fn irreps_of_z2_are_trivial_and_sign() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let set = compute_irreps::<f64>(&z2, 0).unwrap();
        assert_eq!(set.dims(), vec![1, 1]);
        let chi0 = set.irreps()[0].character();
        let chi1 = set.irreps()[1].character();
        assert!((chi0[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((chi0[1] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((chi1[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((chi1[1] - c(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn irreps_of_z3_are_the_three_characters() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let set = compute_irreps::<f64>(&z3, 0).unwrap();
        assert_eq!(set.dims(), vec![1, 1, 1]);
        let omega = C::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        // Canonical order puts the character with positive imaginary part
        // at generator 1 ahead of its conjugate.
        let chi1 = set.irreps()[1].character();
        assert!((chi1[1] - omega).norm() < 1e-9);
        let chi2 = set.irreps()[2].character();
        assert!((chi2[1] - omega.conj()).norm() < 1e-9);
    }

    #[test]
    fn irreps_of_s3_match_the_known_character_table() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let set = compute_irreps::<f64>(&s3, 0).unwrap();
        assert_eq!(set.dims(), vec![1, 1, 2]);
        // Independent oracle: character values depend only on element
        // order. Identity, three order-2 elements, two order-3 elements.
        for (i, rep) in set.irreps().iter().enumerate() {
            let chi = rep.character();
            for g in 0..6 {
                let expected = match (i, s3.element_order(g)) {
                    (0, _) => 1.0,
                    (1, 1) => 1.0,
                    (1, 2) => -1.0,
                    (1, 3) => 1.0,
                    (2, 1) => 2.0,
                    (2, 2) => 0.0,
                    (2, 3) => -1.0,
                    _ => unreachable!("element orders in S3 are 1, 2, 3"),
                };
                assert!(
                    (chi[g] - c(expected, 0.0)).norm() < 1e-9,
                    "irrep {i}, element {g}: got {:?}, want {expected}",
                    chi[g]
                );
            }
        }
    }

    #[test]
    fn irrep_computation_is_deterministic_per_seed() {
        let d4 = FiniteGroup::dihedral(4).unwrap();
        let a = compute_irreps::<f64>(&d4, 11).unwrap();
        let b = compute_irreps::<f64>(&d4, 11).unwrap();
        assert_eq!(a, b);
        // A different seed may change the basis of the 2-dim class, but
        // characters and dimensions are invariants.
        let other = compute_irreps::<f64>(&d4, 99).unwrap();
        assert_eq!(a.dims(), other.dims());
        for (x, y) in a.irreps().iter().zip(other.irreps()) {
            for (u, v) in x.character().iter().zip(y.character()) {
                assert!((*u - v).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn catalog_irrep_sets_satisfy_dimension_count_and_orthogonality() {
        for (name, g) in catalog() {
            let set = compute_irreps::<f64>(&g, 0).unwrap();
            let sum: usize = set.dims().iter().map(|d| d * d).sum();
            assert_eq!(sum, g.order(), "{name}: dimension count");
            let chars: Vec<Vec<C>> = set.irreps().iter().map(|r| r.character()).collect();
            for (i, a) in chars.iter().enumerate() {
                for (j, b) in chars.iter().enumerate() {
                    let inner: C = a
                        .iter()
                        .zip(b)
                        .map(|(x, y)| x * y.conj())
                        .fold(c(0.0, 0.0), |acc, z| acc + z);
                    let expected = if i == j { g.order() as f64 } else { 0.0 };
                    assert!(
                        (inner - c(expected, 0.0)).norm() < 1e-9,
                        "{name}: character inner product ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn flattened_representation_examples() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let set = compute_irreps::<f64>(&z2, 0).unwrap();
        let trivial = rep_as_linear_map(&set.irreps()[0]);
        assert!(trivial.approx_eq(&Map::new(1, 2, vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap(), 1e-12));
        let sign = rep_as_linear_map(&set.irreps()[1]);
        assert!(sign.approx_eq(&Map::new(1, 2, vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap(), 1e-12));
    }

    #[test]
    fn flattening_intertwines_group_and_matrix_multiplication() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let set = compute_irreps::<f64>(&s3, 0).unwrap();
        let m = crate::groupalg::group_multiplication_map::<f64>(&s3);
        for rho in set.irreps() {
            let r = rep_as_linear_map(rho);
            let lhs = r.compose(&m).unwrap();
            let rhs = Map::comp(rho.dim()).compose(&r.tensor(&r)).unwrap();
            assert!(lhs.approx_eq(&rhs, 1e-9));
        }
    }

    #[test]
    fn measurement_isometries_are_coisometries_and_complete() {
        for (name, g) in catalog() {
            let set = compute_irreps::<f64>(&g, 0).unwrap();
            for rho in set.irreps() {
                let v = measurement_isometry(rho);
                let vvdag = v.compose(&v.adjoint()).unwrap();
                let n2 = rho.dim() * rho.dim();
                assert!(
                    vvdag.approx_eq(&Map::identity(n2), 1e-9),
                    "{name}: branch is not a coisometry"
                );
            }
            assert!(
                verify_measurement_completeness(&g, set.irreps(), 1e-9).unwrap(),
                "{name}: branches do not sum to the identity"
            );
        }
    }

    #[test]
    fn repnorm_holds_for_irreducibles_and_fails_for_the_regular_rep() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let set = compute_irreps::<f64>(&z2, 0).unwrap();
        for rho in set.irreps() {
            assert!(verify_repnorm(rho, 1e-9));
        }
        let reg = regular_representation::<f64>(&z2);
        assert!(!verify_repnorm(&reg, 1e-9));
    }

    #[test]
    fn mdecomp_reconstructs_the_multiplication_vertex() {
        for (name, g) in catalog() {
            let set = compute_irreps::<f64>(&g, 0).unwrap();
            assert!(
                verify_mdecomp(&g, set.irreps(), 1e-9).unwrap(),
                "{name}: reconstruction failed"
            );
        }
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let set = compute_irreps::<f64>(&s3, 0).unwrap();
        let partial = &set.irreps()[..2];
        assert!(matches!(
            verify_mdecomp(&s3, partial, 1e-9),
            Err(ReprError::IncompleteIrreps { sum_of_squares: 2, order: 6 })
        ));
    }

    #[test]
    fn copy_on_leg_holds_for_catalog_irreps() {
        for (name, g) in catalog() {
            let set = compute_irreps::<f64>(&g, 0).unwrap();
            for (i, sigma) in set.irreps().iter().enumerate() {
                assert!(
                    verify_copy_on_leg(sigma, 1e-9),
                    "{name}: irrep {i} fails the sliding identity"
                );
            }
        }
    }

    #[test]
    fn copy_on_leg_fails_for_a_non_representation() {
        // Same shapes as the sign character of the two-element group,
        // but the column for the non-identity element has modulus != 1,
        // so the sliding identity breaks.
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let m = crate::groupalg::group_multiplication_map::<f64>(&z2);
        let fake = Map::new(1, 2, vec![c(1.0, 0.0), c(0.5, 0.3)]).unwrap();
        let fake_dag = fake.adjoint();
        let lhs = m.compose(&Map::identity(2).tensor(&fake_dag)).unwrap();
        let rhs = fake_dag
            .compose(&Map::comp(1))
            .unwrap()
            .compose(&fake.tensor(&Map::identity(1)))
            .unwrap();
        assert!(!lhs.approx_eq(&rhs, 1e-9));
    }

    #[test]
    fn classification_examples() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let set = compute_irreps::<f64>(&s3, 0).unwrap();
        let three_cycle = (1..6).find(|&g| s3.element_order(g) == 3).unwrap();
        let a3 = s3.subgroup_closure(&[three_cycle]).unwrap();

        match classify_irrep_vs_normal_subgroup(&set.irreps()[0], &a3, 1e-9).unwrap() {
            SubgroupAction::FactorsThrough { induced, .. } => {
                assert_eq!(induced.dim(), 1);
                assert!((induced.matrix(1).entry(0, 0) - c(1.0, 0.0)).norm() < 1e-9);
            }
            other => panic!("trivial rep must factor, got {other:?}"),
        }
        match classify_irrep_vs_normal_subgroup(&set.irreps()[1], &a3, 1e-9).unwrap() {
            SubgroupAction::FactorsThrough { induced, quotient, residual } => {
                assert_eq!(quotient.quotient.order(), 2);
                assert!((induced.matrix(1).entry(0, 0) - c(-1.0, 0.0)).norm() < 1e-9);
                assert!(residual < 1e-9);
            }
            other => panic!("sign rep must factor to the sign of the quotient, got {other:?}"),
        }
        match classify_irrep_vs_normal_subgroup(&set.irreps()[2], &a3, 1e-9).unwrap() {
            SubgroupAction::Annihilated { pairing_residual } => {
                assert!(pairing_residual < 1e-9);
            }
            other => panic!("2-dim rep must be annihilated, got {other:?}"),
        }
    }

    #[test]
    fn factor_count_matches_quotient_irrep_count() {
        for (name, g) in [
            ("S3", FiniteGroup::symmetric(3).unwrap()),
            ("D4", FiniteGroup::dihedral(4).unwrap()),
        ] {
            let set = compute_irreps::<f64>(&g, 0).unwrap();
            for h in g.normal_subgroups() {
                let mut factoring = 0;
                for rho in set.irreps() {
                    match classify_irrep_vs_normal_subgroup(rho, &h, 1e-9).unwrap() {
                        SubgroupAction::FactorsThrough { .. } => factoring += 1,
                        SubgroupAction::Annihilated { pairing_residual } => {
                            assert!(pairing_residual < 1e-9, "{name}: pairing sum nonzero");
                        }
                    }
                }
                let q = h.quotient().unwrap().quotient;
                let q_classes = compute_irreps::<f64>(&q, 0).unwrap().len();
                assert_eq!(
                    factoring, q_classes,
                    "{name}: factor count vs quotient classes for |H|={}",
                    h.order()
                );
            }
        }
    }

    #[test]
    fn classification_rejects_a_reducible_representation() {
        // The regular representation of the four-element cyclic group
        // sums over the subgroup {0, 2} to a matrix that is neither
        // scaled identity nor zero.
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let h = z4.subgroup_closure(&[2]).unwrap();
        let reg = regular_representation::<f64>(&z4);
        assert!(matches!(
            classify_irrep_vs_normal_subgroup(&reg, &h, 1e-9),
            Err(ReprError::Inconsistent { .. })
        ));
    }

    #[test]
    fn phi_for_the_sign_projector_is_the_standard_ancilla() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let set = compute_irreps::<f64>(&z2, 0).unwrap();
        let p = ProjectorFamily::single(&set, 1).unwrap();
        let phi = make_phi(&set, &p, None).unwrap();
        let r = 1.0 / 2.0f64.sqrt();
        assert!((phi.amplitudes()[0] - c(r, 0.0)).norm() < 1e-12);
        assert!((phi.amplitudes()[1] - c(-r, 0.0)).norm() < 1e-12);
        assert!((phi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phi_for_one_cyclic_character_is_its_conjugate_column() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let set = compute_irreps::<f64>(&z3, 0).unwrap();
        let p = ProjectorFamily::single(&set, 1).unwrap();
        let phi = make_phi(&set, &p, None).unwrap();
        let chi = set.irreps()[1].character();
        let r = 1.0 / 3.0f64.sqrt();
        for g in 0..3 {
            assert!((phi.amplitudes()[g] - chi[g].conj() * r).norm() < 1e-9);
        }
    }

    #[test]
    fn phi_with_identity_projectors_and_dimension_weights_is_a_point_mass() {
        for (name, g) in [
            ("Z4", FiniteGroup::cyclic(4).unwrap()),
            ("S3", FiniteGroup::symmetric(3).unwrap()),
        ] {
            let set = compute_irreps::<f64>(&g, 0).unwrap();
            let p = ProjectorFamily::all_identity(&set);
            let weights: Vec<C> = set.dims().iter().map(|&d| c(d as f64, 0.0)).collect();
            let phi = make_phi(&set, &p, Some(&weights)).unwrap();
            assert!(
                (phi.amplitudes()[0] - c(1.0, 0.0)).norm() < 1e-9,
                "{name}: identity amplitude"
            );
            for g_idx in 1..g.order() {
                assert!(
                    phi.amplitudes()[g_idx].norm() < 1e-9,
                    "{name}: stray amplitude at {g_idx}"
                );
            }
        }
    }

    #[test]
    fn phi_validation_errors() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let set = compute_irreps::<f64>(&z2, 0).unwrap();
        let zero = ProjectorFamily::from_matrices(vec![Map::zeros(1, 1), Map::zeros(1, 1)]);
        assert!(matches!(
            make_phi(&set, &zero, None),
            Err(ReprError::AllProjectorsZero)
        ));
        let doubled = ProjectorFamily::from_matrices(vec![
            Map::identity(1).scale_re(2.0),
            Map::zeros(1, 1),
        ]);
        assert!(matches!(
            make_phi(&set, &doubled, None),
            Err(ReprError::NonProjector { index: 0, .. })
        ));
        let p = ProjectorFamily::single(&set, 1).unwrap();
        assert!(matches!(
            make_phi(&set, &p, Some(&[c(1.0, 0.0), c(0.0, 0.0)])),
            Err(ReprError::BadCoefficients { .. })
        ));
    }

    #[test]
    fn irrep_json_snapshot_is_deterministic() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let a = serde_json::to_string(&compute_irreps::<f64>(&z3, 5).unwrap().to_json()).unwrap();
        let b = serde_json::to_string(&compute_irreps::<f64>(&z3, 5).unwrap().to_json()).unwrap();
        assert_eq!(a, b);
        let parsed: IrrepSetJson = serde_json::from_str(&a).unwrap();
        assert_eq!(parsed.order, 3);
        assert_eq!(parsed.irreps.len(), 3);
        assert_eq!(parsed.irreps[0].character.len(), 3);
        assert_eq!(parsed.irreps[0].matrices.len(), 3);
    }

    #[test]
    fn irreps_work_in_single_precision() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let set = compute_irreps::<f32>(&s3, 0).unwrap();
        assert_eq!(set.dims(), vec![1, 1, 2]);
        for rho in set.irreps() {
            assert!(verify_repnorm(rho, 1e-4f32));
        }
        assert!(verify_mdecomp(&s3, set.irreps(), 1e-4f32).unwrap());
    }

    proptest! {
        // Splitting is randomized, so exercise a spread of seeds to show
        // none of them produces an invalid set.
        #[test]
        fn any_seed_yields_a_valid_irrep_set(seed in 0u64..1000) {
            let d4 = FiniteGroup::dihedral(4).unwrap();
            let set = compute_irreps::<f64>(&d4, seed).unwrap();
            prop_assert_eq!(set.dims(), vec![1, 1, 1, 1, 2]);
            for rho in set.irreps() {
                prop_assert!(rho.is_irreducible(1e-6));
                prop_assert!(verify_repnorm(rho, 1e-9));
            }
        }

        #[test]
        fn random_projector_patterns_give_unit_norm_phi(
            pattern in prop::collection::vec(prop::bool::ANY, 5),
        ) {
            let d4 = FiniteGroup::dihedral(4).unwrap();
            let set = compute_irreps::<f64>(&d4, 0).unwrap();
            prop_assume!(pattern.iter().any(|&b| b));
            let matrices: Vec<Map> = set
                .irreps()
                .iter()
                .zip(&pattern)
                .map(|(rep, &on)| {
                    if on {
                        Map::identity(rep.dim())
                    } else {
                        Map::zeros(rep.dim(), rep.dim())
                    }
                })
                .collect();
            let p = ProjectorFamily::from_matrices(matrices);
            let phi = make_phi(&set, &p, None).unwrap();
            prop_assert!((phi.norm() - 1.0).abs() < 1e-12);
        }
    }
}
