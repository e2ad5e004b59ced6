//! Finite groups presented by Cayley table, with subgroups, quotients,
//! and the linearized multiplication vertex.
//!
//! Elements are indices `0..order` and the identity is always index 0;
//! [`FiniteGroup::from_cayley_table`] relabels a foreign table to restore
//! that convention. Every constructor validates the full set of group
//! axioms, so a value of type [`FiniteGroup`] is always an actual group.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::LinearMap;
use crate::scalar::Scalar;
use crate::setalg::{FiniteSet, FunctionTable};

/// Largest group order the constructors accept. Dense `|G|^2 x |G|`
/// multiplication maps and `|G|`-dimensional regular representations stay
/// comfortably interactive below this size.
pub const DEFAULT_ORDER_CAP: usize = 48;

/// Errors from group construction and quotienting.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    /// The requested group order exceeds the configured cap.
    #[error("group of order {order} exceeds the order cap {cap}")]
    TooLarge { order: usize, cap: usize },

    /// A constructor parameter outside its allowed range.
    #[error("invalid group parameter: {detail}")]
    InvalidParameter { detail: String },

    /// A candidate Cayley table violates a group axiom.
    #[error("not a group, {axiom} fails: {detail}")]
    NotAGroup { axiom: &'static str, detail: String },

    /// An element index outside the group.
    #[error("element {index} is out of range for a group of order {order}")]
    ElementOutOfRange { index: usize, order: usize },

    /// A quotient was requested by a subgroup that is not normal.
    #[error("subgroup is not normal, so the cosets do not form a group")]
    NotNormal,
}

/// A finite group on elements `0..order`, identity at 0, multiplication
/// tabulated in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// The cyclic group of order `n`, addition mod `n`.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidParameter {
                detail: "cyclic group order must be at least 1".into(),
            });
        }
        check_cap(n)?;
        let table = table_from_fn(n, |a, b| (a + b) % n);
        Self::finish(n, table)
    }

    /// The direct product, with pair `(a, b)` at index `a * |G2| + b`.
    pub fn product(g1: &Self, g2: &Self) -> Result<Self, GroupError> {
        let order = g1
            .order
            .checked_mul(g2.order)
            .ok_or(GroupError::TooLarge {
                order: usize::MAX,
                cap: DEFAULT_ORDER_CAP,
            })?;
        check_cap(order)?;
        let table = table_from_fn(order, |a, b| {
            let (a1, a2) = (a / g2.order, a % g2.order);
            let (b1, b2) = (b / g2.order, b % g2.order);
            g1.mul(a1, b1) * g2.order + g2.mul(a2, b2)
        });
        Self::finish(order, table)
    }

    /// The dihedral group of order `2n`: indices `0..n` are the rotations
    /// `r^i`, indices `n..2n` are the reflections `s r^i`.
    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidParameter {
                detail: "dihedral parameter must be at least 1".into(),
            });
        }
        let order = 2 * n;
        check_cap(order)?;
        let table = table_from_fn(order, |x, y| {
            let (xa, xf) = (x % n, x >= n);
            let (ya, yf) = (y % n, y >= n);
            match (xf, yf) {
                (false, false) => (xa + ya) % n,
                (false, true) => n + (n + ya - xa) % n,
                (true, false) => n + (xa + ya) % n,
                (true, true) => (n + ya - xa) % n,
            }
        });
        Self::finish(order, table)
    }

    /// The symmetric group on `n` letters, permutations listed in
    /// lexicographic one-line order so the identity sits at index 0.
    /// Product `p * q` acts as `q` first, then `p`.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidParameter {
                detail: "symmetric group degree must be at least 1".into(),
            });
        }
        let mut order = 1usize;
        for k in 2..=n {
            order = order.saturating_mul(k);
            if order > DEFAULT_ORDER_CAP {
                return Err(GroupError::TooLarge {
                    order,
                    cap: DEFAULT_ORDER_CAP,
                });
            }
        }
        let perms = lexicographic_permutations(n);
        let index_of = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed");
        let table = table_from_fn(order, |a, b| {
            let composed: Vec<usize> = (0..n).map(|x| perms[a][perms[b][x]]).collect();
            index_of(&composed)
        });
        Self::finish(order, table)
    }

    /// The quaternion group of order 8, elements ordered
    /// `1, -1, i, -i, j, -j, k, -k`.
    pub fn quaternion() -> Self {
        // Element x = (sign, axis) with axis 0..4 meaning 1, i, j, k.
        let decode = |x: usize| (x % 2, x / 2);
        let encode = |sign: usize, axis: usize| axis * 2 + sign;
        // Axis product together with the sign it contributes.
        let axis_mul = |a: usize, b: usize| -> (usize, usize) {
            match (a, b) {
                (0, y) => (0, y),
                (x, 0) => (0, x),
                (1, 1) | (2, 2) | (3, 3) => (1, 0),
                (1, 2) => (0, 3),
                (2, 1) => (1, 3),
                (2, 3) => (0, 1),
                (3, 2) => (1, 1),
                (3, 1) => (0, 2),
                (1, 3) => (1, 2),
                _ => unreachable!("axes run over 0..4"),
            }
        };
        let table = table_from_fn(8, |x, y| {
            let (sx, ax) = decode(x);
            let (sy, ay) = decode(y);
            let (sp, axis) = axis_mul(ax, ay);
            encode((sx + sy + sp) % 2, axis)
        });
        Self::finish(8, table).expect("fixed table satisfies the axioms")
    }

    /// Validates an arbitrary Cayley table as a group, relabeling the
    /// identity to index 0 when it sits elsewhere.
    pub fn from_cayley_table(rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        let order = rows.len();
        if order == 0 {
            return Err(GroupError::InvalidParameter {
                detail: "empty table".into(),
            });
        }
        check_cap(order)?;
        let mut table = Vec::with_capacity(order * order);
        for row in rows {
            if row.len() != order {
                return Err(GroupError::NotAGroup {
                    axiom: "closure",
                    detail: format!("row of length {} in a table of order {order}", row.len()),
                });
            }
            for &v in row {
                if v >= order {
                    return Err(GroupError::NotAGroup {
                        axiom: "closure",
                        detail: format!("entry {v} outside 0..{order}"),
                    });
                }
                table.push(v);
            }
        }
        let e = (0..order)
            .find(|&e| (0..order).all(|a| table[e * order + a] == a && table[a * order + e] == a))
            .ok_or(GroupError::NotAGroup {
                axiom: "identity",
                detail: "no two-sided identity element".into(),
            })?;
        if e != 0 {
            // Swap labels 0 and e so the identity lands at index 0.
            let relabel = |x: usize| {
                if x == 0 {
                    e
                } else if x == e {
                    0
                } else {
                    x
                }
            };
            let old = table.clone();
            for a in 0..order {
                for b in 0..order {
                    table[a * order + b] = relabel(old[relabel(a) * order + relabel(b)]);
                }
            }
        }
        Self::finish(order, table)
    }

    fn finish(order: usize, table: Vec<usize>) -> Result<Self, GroupError> {
        debug_assert_eq!(table.len(), order * order);
        for a in 0..order {
            if table[a] != a || table[a * order] != a {
                return Err(GroupError::NotAGroup {
                    axiom: "identity",
                    detail: format!("element 0 does not fix element {a}"),
                });
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = table[a * order + b];
                for c in 0..order {
                    if table[ab * order + c] != table[a * order + table[b * order + c]] {
                        return Err(GroupError::NotAGroup {
                            axiom: "associativity",
                            detail: format!("({a}*{b})*{c} differs from {a}*({b}*{c})"),
                        });
                    }
                }
            }
        }
        let mut inverses = vec![0usize; order];
        for a in 0..order {
            match (0..order).find(|&b| table[a * order + b] == 0 && table[b * order + a] == 0) {
                Some(b) => inverses[a] = b,
                None => {
                    return Err(GroupError::NotAGroup {
                        axiom: "inverses",
                        detail: format!("element {a} has no two-sided inverse"),
                    })
                }
            }
        }
        Ok(Self {
            order,
            table,
            inverses,
        })
    }

    /// Number of elements.
    pub fn order(&self) -> usize {
        self.order
    }

    /// The identity element, always index 0.
    pub fn identity(&self) -> usize {
        0
    }

    /// Product of two elements.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    /// Inverse of an element.
    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// The Cayley table as rows.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| self.table[a * self.order..(a + 1) * self.order].to_vec())
            .collect()
    }

    /// Whether every pair of elements commutes.
    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Smallest `k >= 1` with `a^k = e`.
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Elements that commute with everything.
    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    /// Conjugacy classes, each sorted, ordered by minimal member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for g in 0..self.order {
            if seen[g] {
                continue;
            }
            let mut class: Vec<usize> = (0..self.order)
                .map(|a| self.mul(self.mul(a, g), self.inverse(a)))
                .collect();
            class.sort_unstable();
            class.dedup();
            for &x in &class {
                seen[x] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// Re-runs the full axiom validation. Constructed values always pass;
    /// this exists so tests and callers can audit an instance directly.
    pub fn check_axioms(&self) -> Result<(), GroupError> {
        Self::finish(self.order, self.table.clone()).map(|_| ())
    }

    /// The group's multiplication as a function table on pairs, with pair
    /// `(a, b)` at domain index `a * order + b`.
    pub fn multiplication_table(&self) -> FunctionTable {
        let dom = FiniteSet::new(self.order * self.order);
        let cod = FiniteSet::new(self.order);
        let image = (0..self.order * self.order)
            .map(|i| self.mul(i / self.order, i % self.order))
            .collect();
        FunctionTable::new(dom, cod, image).expect("multiplication is total")
    }

    /// Smallest subgroup containing the given generators.
    pub fn subgroup_closure(&self, generators: &[usize]) -> Result<Subgroup, GroupError> {
        for &g in generators {
            if g >= self.order {
                return Err(GroupError::ElementOutOfRange {
                    index: g,
                    order: self.order,
                });
            }
        }
        let mut member = vec![false; self.order];
        member[0] = true;
        for &g in generators {
            member[g] = true;
        }
        // Saturate under products; inverses follow because elements have
        // finite order.
        loop {
            let current: Vec<usize> = (0..self.order).filter(|&x| member[x]).collect();
            let mut grew = false;
            for &a in &current {
                for &b in &current {
                    let ab = self.mul(a, b);
                    if !member[ab] {
                        member[ab] = true;
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let members: Vec<usize> = (0..self.order).filter(|&x| member[x]).collect();
        Ok(Subgroup {
            parent: self.clone(),
            members,
        })
    }

    /// Every subgroup, found by closing each known subgroup against one
    /// extra generator until nothing new appears. Ordered by size, then
    /// members.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let trivial = self.subgroup_closure(&[]).expect("no generators");
        let mut found: Vec<Vec<usize>> = vec![trivial.members.clone()];
        let mut queue: Vec<Vec<usize>> = vec![trivial.members.clone()];
        while let Some(base) = queue.pop() {
            for g in 1..self.order {
                if base.contains(&g) {
                    continue;
                }
                let mut gens = base.clone();
                gens.push(g);
                let closed = self.subgroup_closure(&gens).expect("indices in range");
                if !found.contains(&closed.members) {
                    found.push(closed.members.clone());
                    queue.push(closed.members);
                }
            }
        }
        found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        found
            .into_iter()
            .map(|members| Subgroup {
                parent: self.clone(),
                members,
            })
            .collect()
    }

    /// The normal subgroups, in the same order as [`Self::all_subgroups`].
    pub fn normal_subgroups(&self) -> Vec<Subgroup> {
        self.all_subgroups()
            .into_iter()
            .filter(|h| h.is_normal())
            .collect()
    }
}

/// A subgroup, stored as its sorted member list together with the parent
/// group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: FiniteGroup,
    members: Vec<usize>,
}

impl Subgroup {
    /// The ambient group.
    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    /// Sorted member indices; always contains 0.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Number of members.
    pub fn order(&self) -> usize {
        self.members.len()
    }

    /// Membership test.
    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    /// Whether conjugation by any parent element stays inside.
    pub fn is_normal(&self) -> bool {
        let g = &self.parent;
        (0..g.order()).all(|a| {
            self.members
                .iter()
                .all(|&h| self.contains(g.mul(g.mul(a, h), g.inverse(a))))
        })
    }

    /// The quotient group on cosets, with the canonical projection.
    /// Cosets are labeled in order of their minimal member, which puts the
    /// identity coset at index 0.
    pub fn quotient(&self) -> Result<QuotientData, GroupError> {
        if !self.is_normal() {
            return Err(GroupError::NotNormal);
        }
        let g = &self.parent;
        let mut coset_of = vec![usize::MAX; g.order()];
        let mut cosets: Vec<Vec<usize>> = Vec::new();
        // Scanning representatives in ascending order labels cosets by
        // minimal member automatically.
        for a in 0..g.order() {
            if coset_of[a] != usize::MAX {
                continue;
            }
            let mut coset: Vec<usize> = self.members.iter().map(|&h| g.mul(a, h)).collect();
            coset.sort_unstable();
            let label = cosets.len();
            for &x in &coset {
                coset_of[x] = label;
            }
            cosets.push(coset);
        }
        let k = cosets.len();
        let table = table_from_fn(k, |ca, cb| {
            coset_of[g.mul(cosets[ca][0], cosets[cb][0])]
        });
        let quotient = FiniteGroup::finish(k, table)?;
        let projection = FunctionTable::new(
            FiniteSet::new(g.order()),
            FiniteSet::new(k),
            coset_of,
        )
        .expect("every element lies in a coset");
        Ok(QuotientData {
            quotient,
            projection,
            cosets,
        })
    }
}

/// A quotient group together with the projection from the parent and the
/// coset partition itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientData {
    pub quotient: FiniteGroup,
    pub projection: FunctionTable,
    pub cosets: Vec<Vec<usize>>,
}

/// The group multiplication as a linear map `|a> (x) |b> -> |a*b>`, the
/// vertex that merges an oracle output into a target register.
pub fn group_multiplication_map<T: Scalar>(g: &FiniteGroup) -> LinearMap<T> {
    let n = g.order();
    LinearMap::from_fn(n, n * n, |r, c| {
        if g.mul(c / n, c % n) == r {
            Complex::one()
        } else {
            Complex::zero()
        }
    })
}

/// Serializable description of a group, as consumed by the command-line
/// interface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupSpec {
    Cyclic { n: usize },
    Product { of: Vec<GroupSpec> },
    Dihedral { n: usize },
    Symmetric { n: usize },
    Quaternion,
    Table { table: Vec<Vec<usize>> },
}

impl GroupSpec {
    /// Builds the described group.
    pub fn build(&self) -> Result<FiniteGroup, GroupError> {
        match self {
            GroupSpec::Cyclic { n } => FiniteGroup::cyclic(*n),
            GroupSpec::Product { of } => {
                let mut parts = of.iter();
                let first = parts.next().ok_or(GroupError::InvalidParameter {
                    detail: "product needs at least one factor".into(),
                })?;
                let mut acc = first.build()?;
                for part in parts {
                    acc = FiniteGroup::product(&acc, &part.build()?)?;
                }
                Ok(acc)
            }
            GroupSpec::Dihedral { n } => FiniteGroup::dihedral(*n),
            GroupSpec::Symmetric { n } => FiniteGroup::symmetric(*n),
            GroupSpec::Quaternion => Ok(FiniteGroup::quaternion()),
            GroupSpec::Table { table } => FiniteGroup::from_cayley_table(table),
        }
    }
}

fn check_cap(order: usize) -> Result<(), GroupError> {
    if order > DEFAULT_ORDER_CAP {
        Err(GroupError::TooLarge {
            order,
            cap: DEFAULT_ORDER_CAP,
        })
    } else {
        Ok(())
    }
}

fn table_from_fn(order: usize, f: impl Fn(usize, usize) -> usize) -> Vec<usize> {
    let mut table = Vec::with_capacity(order * order);
    for a in 0..order {
        for b in 0..order {
            table.push(f(a, b));
        }
    }
    table
}

fn lexicographic_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn go(n: usize, current: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                current.push(x);
                go(n, current, used, out);
                current.pop();
                used[x] = false;
            }
        }
    }
    go(n, &mut current, &mut used, &mut out);
    out
}
