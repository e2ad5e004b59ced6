//! Exact state-vector executions of three query protocols over finite
//! groups, together with the classical predicates their outcomes decide.
//!
//! The deterministic single-query protocols (the constant-vs-balanced
//! test and its group generalization), the single-shot search protocol
//! and its generalization, and the hidden subgroup measurement are all
//! evaluated as dense linear algebra with no sampling involved; the
//! returned distributions are exact up to floating-point rounding.
//! Sampling from a distribution is provided separately for simulation.
//!
//! Register order is always the query set first, the group algebra
//! second. Probabilities are clamped only within a tiny rounding floor;
//! a genuinely negative probability or a lost norm is reported as an
//! internal error instead of being papered over.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groupalg::{group_multiplication_map, FiniteGroup, GroupError, Subgroup};
use crate::linalg::{LinalgError, LinearMap};
use crate::repr::{make_phi, measurement_isometry, IrrepSet, ProjectorFamily, ReprError};
use crate::scalar::Scalar;
use crate::setalg::{self, FiniteSet, FunctionTable};

/// Errors from protocol construction and execution.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgorithmError {
    /// The oracle's codomain does not carry the required structure.
    #[error("function codomain has size {got}, expected {expected}")]
    WrongCodomain { expected: usize, got: usize },

    /// An oracle table and the group meant to act on its codomain
    /// disagree in size.
    #[error("function codomain has size {cod} but the codomain group has order {order}")]
    DimensionMismatch { cod: usize, order: usize },

    /// A hidden-subgroup oracle that breaks its coset promise.
    #[error("oracle violates the coset promise at elements {a} and {b}: {detail}")]
    PromiseViolated { a: usize, b: usize, detail: String },

    /// Subgroup reconstruction needs at least one observation.
    #[error("cannot reconstruct a subgroup from zero observations")]
    EmptyObservations,

    /// The measured register carries no probability mass at all. This
    /// cannot happen for states produced by the shipped protocols, whose
    /// marginals always have trace one; the check guards the contract.
    #[error("final state marginal has vanishing norm")]
    ZeroState,

    /// A probability below the rounding floor: a logic error, not noise.
    #[error("computed probability {value} is negative beyond the rounding floor")]
    NegativeProbability { value: f64 },

    /// An internal conservation law failed; indicates a bug.
    #[error("numerical inconsistency: {detail}")]
    NumericalInconsistency { detail: String },

    /// Representation-level failure.
    #[error(transparent)]
    Repr(#[from] ReprError),

    /// Group-level failure.
    #[error(transparent)]
    Group(#[from] GroupError),

    /// Linear-algebra-level failure.
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A measurement outcome label: a basis-state index or a free-form tag.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OutcomeLabel {
    Index(usize),
    Text(String),
}

/// An exact probability distribution over labeled outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T> {
    outcomes: Vec<(OutcomeLabel, T)>,
}

impl<T: Scalar> Distribution<T> {
    /// Clamps rounding-level negatives to zero, rejects anything more
    /// negative, and checks the total against the expected value.
    fn from_raw(
        labels: Vec<OutcomeLabel>,
        raw: Vec<T>,
        expected_total: T,
    ) -> Result<Self, AlgorithmError> {
        debug_assert_eq!(labels.len(), raw.len());
        let mut outcomes = Vec::with_capacity(raw.len());
        for (label, p) in labels.into_iter().zip(raw) {
            if p < -T::prob_floor() {
                return Err(AlgorithmError::NegativeProbability {
                    value: p.to_f64().unwrap_or(f64::NAN),
                });
            }
            outcomes.push((label, p.max(T::zero())));
        }
        let total = outcomes
            .iter()
            .fold(T::zero(), |acc, (_, p)| acc + *p);
        if (total - expected_total).abs() > T::default_tol() {
            return Err(AlgorithmError::NumericalInconsistency {
                detail: format!(
                    "probabilities sum to {total}, expected {expected_total}"
                ),
            });
        }
        Ok(Self { outcomes })
    }

    /// The labeled probabilities.
    pub fn outcomes(&self) -> &[(OutcomeLabel, T)] {
        &self.outcomes
    }

    /// Number of outcomes.
    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    /// Whether there are no outcomes.
    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// Probability of outcome `i`.
    pub fn probability(&self, i: usize) -> T {
        self.outcomes[i].1
    }

    /// Indices of outcomes with probability above the tolerance.
    pub fn support(&self, tol: T) -> Vec<usize> {
        self.outcomes
            .iter()
            .enumerate()
            .filter(|(_, (_, p))| *p > tol)
            .map(|(i, _)| i)
            .collect()
    }

    /// Total mass.
    pub fn total(&self) -> T {
        self.outcomes.iter().fold(T::zero(), |acc, (_, p)| acc + *p)
    }

    /// Serializable snapshot in double precision.
    pub fn to_json(&self) -> DistributionJson {
        DistributionJson {
            outcomes: self
                .outcomes
                .iter()
                .map(|(label, p)| OutcomeJson {
                    label: match label {
                        OutcomeLabel::Index(i) => LabelJson::Index(*i),
                        OutcomeLabel::Text(t) => LabelJson::Text(t.clone()),
                    },
                    p: p.to_f64().unwrap_or(f64::NAN),
                })
                .collect(),
        }
    }
}

/// JSON form of a distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionJson {
    pub outcomes: Vec<OutcomeJson>,
}

/// JSON form of one outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeJson {
    pub label: LabelJson,
    pub p: f64,
}

/// JSON form of a label: plain integer or string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelJson {
    Index(usize),
    Text(String),
}

/// Multinomial sampling: `trials` independent draws, returned as counts
/// aligned with the distribution's outcomes. Deterministic per seed.
pub fn sample<T: Scalar>(d: &Distribution<T>, seed: u64, trials: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cumulative = Vec::with_capacity(d.len());
    let mut acc = 0.0f64;
    for (_, p) in d.outcomes() {
        acc += p.to_f64().unwrap_or(0.0);
        cumulative.push(acc);
    }
    let total = acc;
    let mut counts = vec![0usize; d.len()];
    for _ in 0..trials {
        let r = rng.random::<f64>() * total;
        let idx = cumulative
            .iter()
            .position(|&c| r < c)
            .unwrap_or(d.len().saturating_sub(1));
        counts[idx] += 1;
    }
    counts
}

/// The query oracle as a unitary on `S (x) X`: reading the queried value
/// into the `X` register by group multiplication, `|s> (x) |b| ->
/// |s> (x) |f(s) * b>`. Built compositionally: copy the query register,
/// apply the function to the copy, multiply the result into the target.
pub fn build_oracle_unitary<T: Scalar>(
    f: &FunctionTable,
    x_group: &FiniteGroup,
) -> Result<LinearMap<T>, AlgorithmError> {
    let s = f.dom().size();
    let x = x_group.order();
    if f.cod().size() != x {
        return Err(AlgorithmError::DimensionMismatch {
            cod: f.cod().size(),
            order: x,
        });
    }
    let id_s = LinearMap::identity(s);
    let id_x = LinearMap::identity(x);
    let copy_s = setalg::copy::<T>(f.dom());
    let lf = setalg::linearize::<T>(f);
    let m = group_multiplication_map::<T>(x_group);

    let fan_out = copy_s.tensor(&id_x);
    let apply_f = id_s.tensor(&lf).tensor(&id_x);
    let merge = id_s.tensor(&m);
    let u = merge
        .compose(&apply_f)
        .and_then(|v| v.compose(&fan_out))
        .expect("stage shapes line up by construction");

    let gram = u.adjoint().compose(&u).expect("square");
    if !gram.approx_eq(&LinearMap::identity(s * x), T::strict_tol()) {
        return Err(AlgorithmError::NumericalInconsistency {
            detail: "oracle unitary failed its unitarity check".into(),
        });
    }
    Ok(u)
}

/// Whether every element maps to one value.
pub fn is_constant(f: &FunctionTable) -> bool {
    f.images().iter().all(|&v| v == f.apply(0))
}

/// Whether a function into a two-element set takes each value on exactly
/// half the domain. Always false for an odd domain, where no balanced
/// function exists.
pub fn is_balanced(f: &FunctionTable) -> Result<bool, AlgorithmError> {
    if f.cod().size() != 2 {
        return Err(AlgorithmError::WrongCodomain {
            expected: 2,
            got: f.cod().size(),
        });
    }
    let n = f.dom().size();
    if n % 2 != 0 {
        return Ok(false);
    }
    let ones = f.images().iter().filter(|&&v| v == 1).count();
    Ok(ones == n / 2)
}

/// Verdict of a deterministic single-query run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Constant,
    Balanced,
    Inconclusive,
}

/// Result of a deterministic single-query run: the probability of
/// finding the query register back in the uniform superposition, and
/// the verdict that probability supports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DJResult<T> {
    pub success_probability: T,
    pub verdict: Verdict,
}

fn verdict_from_probability<T: Scalar>(p: T, tol: T) -> Verdict {
    if (p - T::one()).abs() <= tol {
        Verdict::Constant
    } else if p <= tol {
        Verdict::Balanced
    } else {
        Verdict::Inconclusive
    }
}

fn ensure_unit_norm<T: Scalar>(state: &LinearMap<T>, context: &str) -> Result<(), AlgorithmError> {
    let norm = state.norm();
    if (norm - T::one()).abs() > T::default_tol() {
        return Err(AlgorithmError::NumericalInconsistency {
            detail: format!("{context} state has norm {norm}, expected 1"),
        });
    }
    Ok(())
}

/// The pre-measurement state of the constant-vs-balanced protocol on
/// `S (x) X` with `X` the two-element group: uniform superposition and
/// sign-character ancilla through the oracle.
pub fn deutsch_jozsa_state<T: Scalar>(f: &FunctionTable) -> Result<LinearMap<T>, AlgorithmError> {
    if f.cod().size() != 2 {
        return Err(AlgorithmError::WrongCodomain {
            expected: 2,
            got: f.cod().size(),
        });
    }
    let z2 = FiniteGroup::cyclic(2).expect("order 2 is under the cap");
    let u = build_oracle_unitary::<T>(f, &z2)?;
    let s = f.dom().size();
    let r = T::one() / (T::one() + T::one()).sqrt();
    let ancilla = LinearMap::new(
        2,
        1,
        vec![Complex::new(r, T::zero()), Complex::new(-r, T::zero())],
    )
    .expect("two entries");
    let input = LinearMap::uniform_state(s).tensor(&ancilla);
    let state = u.compose(&input).expect("conforming shapes");
    ensure_unit_norm(&state, "pre-measurement")?;
    Ok(state)
}

/// Runs the constant-vs-balanced protocol at the default tolerance.
pub fn deutsch_jozsa<T: Scalar>(f: &FunctionTable) -> Result<DJResult<T>, AlgorithmError> {
    deutsch_jozsa_with_tol(f, T::default_tol())
}

/// Runs the constant-vs-balanced protocol: prepares the state, projects
/// the query register onto the uniform superposition, and reports the
/// branch probability. Certainty (probability 1 or 0 within `tol`) gives
/// a definite verdict; anything else is inconclusive, which only happens
/// for inputs violating the promise.
pub fn deutsch_jozsa_with_tol<T: Scalar>(
    f: &FunctionTable,
    tol: T,
) -> Result<DJResult<T>, AlgorithmError> {
    let state = deutsch_jozsa_state::<T>(f)?;
    let s = f.dom().size();
    let bra = LinearMap::uniform_state(s)
        .adjoint()
        .tensor(&LinearMap::identity(2));
    let branch = bra.compose(&state).expect("conforming shapes");
    let norm = branch.norm();
    Ok(DJResult {
        success_probability: norm * norm,
        verdict: verdict_from_probability(norm * norm, tol),
    })
}

/// Whether `f` into the represented group is projector-constant: on
/// every class, the projected values `rho(f(s)) * P` coincide across the
/// whole domain.
pub fn is_p_constant<T: Scalar>(
    f: &FunctionTable,
    irreps: &IrrepSet<T>,
    projectors: &ProjectorFamily<T>,
    tol: T,
) -> Result<bool, AlgorithmError> {
    let projected = projected_values(f, irreps, projectors)?;
    for per_class in projected {
        if let Some((first, rest)) = per_class.split_first() {
            for m in rest {
                if !m.approx_eq(first, tol) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Whether `f` into the represented group is projector-balanced: on
/// every class, the projected values sum to zero over the domain.
pub fn is_p_balanced<T: Scalar>(
    f: &FunctionTable,
    irreps: &IrrepSet<T>,
    projectors: &ProjectorFamily<T>,
    tol: T,
) -> Result<bool, AlgorithmError> {
    let projected = projected_values(f, irreps, projectors)?;
    for per_class in projected {
        let Some(first) = per_class.first() else {
            continue;
        };
        let mut sum = LinearMap::zeros(first.cod(), first.dom());
        for m in &per_class {
            sum = sum.add(m).expect("same shape");
        }
        if sum.max_abs() > tol * T::from_usize_lossy(f.dom().size()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For each irrep class with a nonzero projector, the projected value
/// `rho(f(s)) * P` for every domain element. Classes with zero projector
/// contribute an empty list.
fn projected_values<T: Scalar>(
    f: &FunctionTable,
    irreps: &IrrepSet<T>,
    projectors: &ProjectorFamily<T>,
) -> Result<Vec<Vec<LinearMap<T>>>, AlgorithmError> {
    check_into_group(f, irreps.group())?;
    projectors.validate(irreps, T::default_tol())?;
    let mut out = Vec::with_capacity(irreps.len());
    for (rep, p) in irreps.irreps().iter().zip(projectors.matrices()) {
        if p.max_abs() <= T::default_tol() {
            out.push(Vec::new());
            continue;
        }
        let per_class = f
            .images()
            .iter()
            .map(|&v| rep.matrix(v).compose(p).expect("square"))
            .collect();
        out.push(per_class);
    }
    Ok(out)
}

fn check_into_group(f: &FunctionTable, group: &FiniteGroup) -> Result<(), AlgorithmError> {
    if f.cod().size() != group.order() {
        return Err(AlgorithmError::DimensionMismatch {
            cod: f.cod().size(),
            order: group.order(),
        });
    }
    Ok(())
}

/// The pre-measurement state of the generalized single-query protocol on
/// `S (x) G`: uniform superposition and the projector state through the
/// oracle.
pub fn generalized_deutsch_jozsa_state<T: Scalar>(
    f: &FunctionTable,
    irreps: &IrrepSet<T>,
    projectors: &ProjectorFamily<T>,
    coefficients: Option<&[Complex<T>]>,
) -> Result<LinearMap<T>, AlgorithmError> {
    check_into_group(f, irreps.group())?;
    let phi = make_phi(irreps, projectors, coefficients)?;
    let u = build_oracle_unitary::<T>(f, irreps.group())?;
    let input = LinearMap::uniform_state(f.dom().size()).tensor(phi.state());
    let state = u.compose(&input).expect("conforming shapes");
    ensure_unit_norm(&state, "pre-measurement")?;
    Ok(state)
}

/// Runs the generalized single-query protocol at the default tolerance.
pub fn generalized_deutsch_jozsa<T: Scalar>(
    f: &FunctionTable,
    irreps: &IrrepSet<T>,
    projectors: &ProjectorFamily<T>,
    coefficients: Option<&[Complex<T>]>,
) -> Result<DJResult<T>, AlgorithmError> {
    generalized_deutsch_jozsa_with_tol(f, irreps, projectors, coefficients, T::default_tol())
}

/// Runs the generalized single-query protocol: projector-constant
/// functions succeed with certainty, projector-balanced functions with
/// probability zero, and the exact branch probability is reported either
/// way.
pub fn generalized_deutsch_jozsa_with_tol<T: Scalar>(
    f: &FunctionTable,
    irreps: &IrrepSet<T>,
    projectors: &ProjectorFamily<T>,
    coefficients: Option<&[Complex<T>]>,
    tol: T,
) -> Result<DJResult<T>, AlgorithmError> {
    let state = generalized_deutsch_jozsa_state(f, irreps, projectors, coefficients)?;
    let s = f.dom().size();
    let order = irreps.group().order();
    let bra = LinearMap::uniform_state(s)
        .adjoint()
        .tensor(&LinearMap::identity(order));
    let branch = bra.compose(&state).expect("conforming shapes");
    let norm = branch.norm();
    Ok(DJResult {
        success_probability: norm * norm,
        verdict: verdict_from_probability(norm * norm, tol),
    })
}

/// The reflection about the mean on the free space of `s`: identity
/// minus `2/|S|` times the all-ones matrix. Unitary, Hermitian, and an
/// involution.
pub fn diffusion_operator<T: Scalar>(s: &FiniteSet) -> LinearMap<T> {
    let n = s.size();
    let scale = (T::one() + T::one()) / T::from_usize_lossy(n);
    LinearMap::from_fn(n, n, |r, c| {
        let diag = if r == c { T::one() } else { T::zero() };
        Complex::new(diag - scale, T::zero())
    })
}

/// The pre-measurement state of the single-shot search protocol on
/// `S (x) X`, `X` the two-element group: oracle then diffusion on the
/// query register.
pub fn grover_state<T: Scalar>(f: &FunctionTable) -> Result<LinearMap<T>, AlgorithmError> {
    let after_oracle = deutsch_jozsa_state::<T>(f)?;
    let d = diffusion_operator::<T>(f.dom());
    let state = d
        .tensor(&LinearMap::identity(2))
        .compose(&after_oracle)
        .expect("conforming shapes");
    ensure_unit_norm(&state, "post-diffusion")?;
    Ok(state)
}

/// Runs the single-shot search protocol and measures the query register
/// in the computational basis, with the group register traced out
/// exactly. When a quarter of the elements are marked, the outcome is a
/// uniformly random marked element with certainty.
pub fn grover_single_shot<T: Scalar>(
    f: &FunctionTable,
) -> Result<Distribution<T>, AlgorithmError> {
    let state = grover_state::<T>(f)?;
    measure_first_register(&state, f.dom().size(), 2)
}

/// Measures the first register of a bipartite pure state by exact
/// partial trace over the second.
fn measure_first_register<T: Scalar>(
    state: &LinearMap<T>,
    dim_first: usize,
    dim_second: usize,
) -> Result<Distribution<T>, AlgorithmError> {
    let marginal = state.partial_trace_second(dim_first, dim_second)?;
    let raw: Vec<T> = (0..dim_first).map(|i| marginal.entry(i, i).re).collect();
    let total = raw.iter().fold(T::zero(), |acc, p| acc + *p);
    if total < T::default_tol() {
        return Err(AlgorithmError::ZeroState);
    }
    let labels = (0..dim_first).map(OutcomeLabel::Index).collect();
    Distribution::from_raw(labels, raw, T::one())
}

/// The elements whose projected oracle value equals twice the average
/// projected value on every irrep class: exactly the outcomes the
/// generalized search protocol can never return.
pub fn balanced_elements<T: Scalar>(
    f: &FunctionTable,
    irreps: &IrrepSet<T>,
    projectors: &ProjectorFamily<T>,
    tol: T,
) -> Result<Vec<usize>, AlgorithmError> {
    let projected = projected_values(f, irreps, projectors)?;
    let n = f.dom().size();
    let two_over_n = (T::one() + T::one()) / T::from_usize_lossy(n);
    let mut balanced: Vec<bool> = vec![true; n];
    for per_class in &projected {
        let Some(first) = per_class.first() else {
            continue;
        };
        let mut sum = LinearMap::zeros(first.cod(), first.dom());
        for m in per_class {
            sum = sum.add(m).expect("same shape");
        }
        let doubled_average = sum.scale_re(two_over_n);
        for (s, m) in per_class.iter().enumerate() {
            if !m.approx_eq(&doubled_average, tol) {
                balanced[s] = false;
            }
        }
    }
    Ok((0..n).filter(|&s| balanced[s]).collect())
}

/// The pre-measurement state of the generalized search protocol on
/// `S (x) G`.
pub fn generalized_grover_state<T: Scalar>(
    f: &FunctionTable,
    irreps: &IrrepSet<T>,
    projectors: &ProjectorFamily<T>,
    coefficients: Option<&[Complex<T>]>,
) -> Result<LinearMap<T>, AlgorithmError> {
    let after_oracle = generalized_deutsch_jozsa_state(f, irreps, projectors, coefficients)?;
    let d = diffusion_operator::<T>(f.dom());
    let state = d
        .tensor(&LinearMap::identity(irreps.group().order()))
        .compose(&after_oracle)
        .expect("conforming shapes");
    ensure_unit_norm(&state, "post-diffusion")?;
    Ok(state)
}

/// Runs the generalized search protocol and measures the query register.
/// Balanced elements never appear in the support.
pub fn generalized_grover<T: Scalar>(
    f: &FunctionTable,
    irreps: &IrrepSet<T>,
    projectors: &ProjectorFamily<T>,
    coefficients: Option<&[Complex<T>]>,
) -> Result<Distribution<T>, AlgorithmError> {
    let state = generalized_grover_state(f, irreps, projectors, coefficients)?;
    measure_first_register(&state, f.dom().size(), irreps.group().order())
}

/// A validated hidden-subgroup instance: an oracle on the group that is
/// constant on the cosets of a normal subgroup and takes distinct values
/// on distinct cosets. The subgroup is derived from the oracle and the
/// promise is checked exhaustively.
#[derive(Debug, Clone)]
pub struct HSPInstance {
    group: FiniteGroup,
    hidden: Subgroup,
    oracle: FunctionTable,
}

impl HSPInstance {
    /// Validates an oracle against the coset promise. The hidden
    /// subgroup is recovered as the set of elements sharing the
    /// identity's value.
    pub fn new(group: FiniteGroup, oracle: FunctionTable) -> Result<Self, AlgorithmError> {
        if oracle.dom().size() != group.order() {
            return Err(AlgorithmError::DimensionMismatch {
                cod: oracle.dom().size(),
                order: group.order(),
            });
        }
        let e_value = oracle.apply(group.identity());
        let members: Vec<usize> = (0..group.order())
            .filter(|&g| oracle.apply(g) == e_value)
            .collect();
        for &a in &members {
            for &b in &members {
                if !members.contains(&group.mul(a, b)) {
                    return Err(AlgorithmError::PromiseViolated {
                        a,
                        b,
                        detail: "the identity-value fiber is not closed under multiplication"
                            .into(),
                    });
                }
            }
        }
        let hidden = group.subgroup_closure(&members)?;
        if !hidden.is_normal() {
            let (a, b) = (0..group.order())
                .flat_map(|g| hidden.members().iter().map(move |&h| (g, h)))
                .find(|&(g, h)| !hidden.contains(group.mul(group.mul(g, h), group.inverse(g))))
                .expect("a witness exists when normality fails");
            return Err(AlgorithmError::PromiseViolated {
                a,
                b,
                detail: "the identity-value fiber is not a normal subgroup".into(),
            });
        }
        let quotient = hidden.quotient()?;
        for coset in &quotient.cosets {
            let v = oracle.apply(coset[0]);
            for &x in &coset[1..] {
                if oracle.apply(x) != v {
                    return Err(AlgorithmError::PromiseViolated {
                        a: coset[0],
                        b: x,
                        detail: "oracle is not constant on a coset".into(),
                    });
                }
            }
        }
        for (i, ci) in quotient.cosets.iter().enumerate() {
            for cj in &quotient.cosets[i + 1..] {
                if oracle.apply(ci[0]) == oracle.apply(cj[0]) {
                    return Err(AlgorithmError::PromiseViolated {
                        a: ci[0],
                        b: cj[0],
                        detail: "oracle repeats a value across distinct cosets".into(),
                    });
                }
            }
        }
        Ok(Self {
            group,
            hidden,
            oracle,
        })
    }

    /// The canonical instance for a normal subgroup: the oracle is the
    /// projection onto coset labels.
    pub fn from_subgroup(hidden: &Subgroup) -> Result<Self, AlgorithmError> {
        let data = hidden.quotient()?;
        Self::new(hidden.parent().clone(), data.projection)
    }

    /// The ambient group.
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// The hidden subgroup the oracle encodes.
    pub fn hidden(&self) -> &Subgroup {
        &self.hidden
    }

    /// The promised oracle.
    pub fn oracle(&self) -> &FunctionTable {
        &self.oracle
    }
}

/// The post-oracle state of the hidden-subgroup protocol on
/// `G (x) S`: uniform superposition on the group, oracle value read into
/// a register initialized at the basis state 0, with the codomain given
/// the cyclic group structure whose identity is label 0. Only the
/// identity's action is used, so any relabeling gives the same state.
pub fn hsp_state<T: Scalar>(inst: &HSPInstance) -> Result<LinearMap<T>, AlgorithmError> {
    let s_size = inst.oracle().cod().size();
    let codomain_group = FiniteGroup::cyclic(s_size)?;
    let u = build_oracle_unitary::<T>(inst.oracle(), &codomain_group)?;
    let input = LinearMap::uniform_state(inst.group().order())
        .tensor(&LinearMap::basis_state(s_size, 0));
    let state = u.compose(&input).expect("conforming shapes");
    ensure_unit_norm(&state, "post-oracle")?;
    Ok(state)
}

/// Measures the group register of the hidden-subgroup state in the
/// projective measurement indexed by irrep classes. Classes whose irrep
/// kills the hidden subgroup's sum get probability zero; classes
/// factoring through the quotient get `(|H|/|G|) * dim^2`.
pub fn hsp_distribution<T: Scalar>(
    inst: &HSPInstance,
    irreps: &IrrepSet<T>,
) -> Result<Distribution<T>, AlgorithmError> {
    let state = hsp_state::<T>(inst)?;
    let s_size = inst.oracle().cod().size();
    let id_s = LinearMap::identity(s_size);
    let mut raw = Vec::with_capacity(irreps.len());
    let mut labels = Vec::with_capacity(irreps.len());
    for (i, rho) in irreps.irreps().iter().enumerate() {
        let v = measurement_isometry(rho);
        let branch = v.tensor(&id_s).compose(&state).expect("conforming shapes");
        let norm = branch.norm();
        raw.push(norm * norm);
        labels.push(OutcomeLabel::Index(i));
    }
    Distribution::from_raw(labels, raw, T::one())
}

/// A representation matrix counts as the identity only when it is far
/// closer to it than any non-identity unitary of modest finite order can
/// be, so kernel membership is a robust discrete decision.
const KERNEL_MEMBERSHIP_TOL: f64 = 1e-3;

/// Intersects the kernels of the observed irrep classes. With
/// observations covering every class the hidden subgroup assigns
/// positive probability, the intersection is exactly that subgroup.
pub fn hsp_reconstruct<T: Scalar>(
    irreps: &IrrepSet<T>,
    observed: &[usize],
) -> Result<Subgroup, AlgorithmError> {
    if observed.is_empty() {
        return Err(AlgorithmError::EmptyObservations);
    }
    let group = irreps.group();
    let tol = T::from_f64_lossy(KERNEL_MEMBERSHIP_TOL);
    let members: Vec<usize> = (0..group.order())
        .filter(|&g| {
            observed.iter().all(|&i| {
                let rho = &irreps.irreps()[i];
                rho.matrix(g)
                    .approx_eq(&LinearMap::identity(rho.dim()), tol)
            })
        })
        .collect();
    Ok(group.subgroup_closure(&members)?)
}
