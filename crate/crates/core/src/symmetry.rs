//! Signed permutations, their antiunitary extensions, and finite groups
//! generated by them.
//!
//! A [`SignedPermutation`] acts on coordinates as `x_j → s_j x_{π(j)}`; its
//! matrix has `S[j][π(j)] = s_j`. An [`AntiunitaryOp`] optionally follows the
//! coordinate map by time reversal `T`, which conjugates scalars and commutes
//! with every signed permutation.
//!
//! On the quadratic form a unitary operator acts as `M → S M Sᵀ` and an
//! antiunitary one as `M → S M* Sᵀ`. The kinetic term `½ p·p` is invariant
//! under both, so these fully describe the action on `H`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::hamiltonian::{quadratic_form, OscillatorChain, QuadraticForm};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedPermutation {
    /// 0-based images `π(j)`.
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let n = perm.len();
        if signs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: signs.len(),
            });
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidChain(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidChain(format!("signs {signs:?} must be ±1")));
        }
        Ok(Self { perm, signs })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    /// `x_j → s_j x_j`.
    pub fn diagonal(signs: Vec<i8>) -> Result<Self> {
        Self::new((0..signs.len()).collect(), signs)
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(j, &p)| p == j) && self.signs.iter().all(|&s| s == 1)
    }

    /// Dense matrix `S` with `S[j][π(j)] = s_j`.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut m = vec![vec![0.0; n]; n];
        for j in 0..n {
            m[j][self.perm[j]] = f64::from(self.signs[j]);
        }
        m
    }

    /// `(S x)_j = s_j x_{π(j)}`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|j| f64::from(self.signs[j]) * x[self.perm[j]])
            .collect()
    }

    pub fn inverse(&self) -> Self {
        let n = self.dim();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for j in 0..n {
            perm[self.perm[j]] = j;
            signs[self.perm[j]] = self.signs[j];
        }
        Self { perm, signs }
    }

    /// Smallest `k ≥ 1` with `selfᵏ = identity`.
    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = compose(self, &p).expect("same dimension");
            k += 1;
        }
        k
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for j in 0..self.dim() {
            if j > 0 {
                write!(f, ", ")?;
            }
            let s = if self.signs[j] < 0 { "-" } else { "" };
            write!(f, "{s}x{}", self.perm[j] + 1)?;
        }
        write!(f, "]")
    }
}

/// Matrix product `S_a S_b`: apply `b` first, then `a`.
pub fn compose(a: &SignedPermutation, b: &SignedPermutation) -> Result<SignedPermutation> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    // (S_a S_b)[j][k] = s^a_j · S_b[π_a(j)][k], nonzero at k = π_b(π_a(j)).
    let perm = a.perm.iter().map(|&pa| b.perm[pa]).collect();
    let signs = a
        .perm
        .iter()
        .zip(&a.signs)
        .map(|(&pa, &sa)| sa * b.signs[pa])
        .collect();
    Ok(SignedPermutation { perm, signs })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AntiunitaryOp {
    pub unitary_part: SignedPermutation,
    /// Includes time reversal `T`.
    pub conjugates: bool,
}

impl AntiunitaryOp {
    pub fn unitary(s: SignedPermutation) -> Self {
        Self {
            unitary_part: s,
            conjugates: false,
        }
    }

    /// `S·T`.
    pub fn with_time_reversal(s: SignedPermutation) -> Self {
        Self {
            unitary_part: s,
            conjugates: true,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::unitary(SignedPermutation::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.unitary_part.dim()
    }

    pub fn is_identity(&self) -> bool {
        !self.conjugates && self.unitary_part.is_identity()
    }

    /// `self ∘ other`. Signed permutations are real, so `T` passes through
    /// them unchanged and only the parity of `T` factors matters.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            unitary_part: compose(&self.unitary_part, &other.unitary_part)?,
            conjugates: self.conjugates ^ other.conjugates,
        })
    }
}

impl fmt::Display for AntiunitaryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.unitary_part)?;
        if self.conjugates {
            write!(f, "T")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GeneratorName {
    U1,
    U2,
    U3,
    U4,
    W1,
    W2,
    W3,
    W4,
}

impl GeneratorName {
    pub const ALL: [Self; 8] = [
        Self::U1,
        Self::U2,
        Self::U3,
        Self::U4,
        Self::W1,
        Self::W2,
        Self::W3,
        Self::W4,
    ];

    pub fn is_w(self) -> bool {
        matches!(self, Self::W1 | Self::W2 | Self::W3 | Self::W4)
    }
}

impl fmt::Display for GeneratorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The four coupling-preserving maps `U1..U4` and the four coupling-reversing
/// maps `W1..W4` of an `N`-oscillator chain (only `U1`, `U2` when `N = 1`).
pub fn canonical_generators(n_osc: usize) -> BTreeMap<GeneratorName, SignedPermutation> {
    use GeneratorName::*;
    let n = n_osc;
    let mut out = BTreeMap::new();
    let u1 = SignedPermutation::identity(n);
    let u2 = SignedPermutation {
        perm: (0..n).collect(),
        signs: vec![-1; n],
    };
    out.insert(U1, u1);
    out.insert(U2, u2.clone());
    if n < 2 {
        return out;
    }
    let u3 = SignedPermutation {
        perm: (0..n).rev().collect(),
        signs: vec![1; n],
    };
    let u4 = compose(&u2, &u3).expect("same dimension");
    // With 1-based j: W1 has sign (−1)^j, W2 has (−1)^(j+1).
    let w1 = SignedPermutation {
        perm: (0..n).collect(),
        signs: (0..n).map(|j| if j % 2 == 0 { -1 } else { 1 }).collect(),
    };
    let w2 = SignedPermutation {
        perm: (0..n).collect(),
        signs: (0..n).map(|j| if j % 2 == 0 { 1 } else { -1 }).collect(),
    };
    let w3 = compose(&u3, &w1).expect("same dimension");
    let w4 = compose(&u3, &w2).expect("same dimension");
    out.insert(U3, u3);
    out.insert(U4, u4);
    out.insert(W1, w1);
    out.insert(W2, w2);
    out.insert(W3, w3);
    out.insert(W4, w4);
    out
}

/// `S M Sᵀ`, or `S M* Sᵀ` when `conj` is set.
pub fn conjugate_form(m: &QuadraticForm, s: &SignedPermutation, conj: bool) -> Result<QuadraticForm> {
    let n = m.dim();
    if s.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: s.dim(),
        });
    }
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let sign = f64::from(s.signs[i] * s.signs[j]);
            let v = m.get(s.perm[i], s.perm[j]);
            entries.push(if conj { v.conj() } else { v } * sign);
        }
    }
    QuadraticForm::from_entries(n, entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CommutantClass {
    /// Leaves both `H₀` and `H′` invariant.
    InG,
    /// Leaves `H₀` invariant and reverses the sign of `H′`.
    InSW,
    Neither,
}

const FORM_RTOL: f64 = 1e-12;

fn forms_equal(a: &QuadraticForm, b: &QuadraticForm) -> bool {
    let scale = a
        .entries()
        .iter()
        .map(|z| z.norm())
        .fold(1.0, f64::max);
    a.max_abs_diff(b) <= FORM_RTOL * scale
}

/// Where `op` sits relative to the split `H = H₀ + λH′` of `chain`.
pub fn commutant_class(op: &SignedPermutation, chain: &OscillatorChain) -> Result<CommutantClass> {
    let h0 = QuadraticForm::for_coupling(chain, C64::new(0.0, 0.0));
    let free = chain.with_g(0.0)?;
    // Coupling pattern alone: zero diagonal, unit off-diagonals.
    let pattern = {
        let full = QuadraticForm::for_coupling(&free, C64::new(1.0, 0.0));
        let n = full.dim();
        let entries = (0..n * n)
            .map(|k| if k / n == k % n { C64::new(0.0, 0.0) } else { full.entries()[k] })
            .collect();
        QuadraticForm::from_entries(n, entries)?
    };
    if !forms_equal(&conjugate_form(&h0, op, false)?, &h0) {
        return Ok(CommutantClass::Neither);
    }
    let moved = conjugate_form(&pattern, op, false)?;
    if forms_equal(&moved, &pattern) {
        return Ok(CommutantClass::InG);
    }
    let negated = QuadraticForm::from_entries(
        pattern.dim(),
        pattern.entries().iter().map(|z| -z).collect(),
    )?;
    if forms_equal(&moved, &negated) {
        Ok(CommutantClass::InSW)
    } else {
        Ok(CommutantClass::Neither)
    }
}

/// Finite group with its multiplication table. `cayley[i][j]` is the index
/// of `elements[i] ∘ elements[j]`; element 0 is the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupTable {
    pub elements: Vec<AntiunitaryOp>,
    pub cayley: Vec<Vec<usize>>,
    pub label: GroupLabel,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|i| (0..i).all(|j| self.cayley[i][j] == self.cayley[j][i]))
    }

    /// Order of each element, by repeated multiplication in the table.
    pub fn element_orders(&self) -> Vec<usize> {
        (0..self.order())
            .map(|i| {
                let mut cur = i;
                let mut k = 1;
                while cur != 0 {
                    cur = self.cayley[i][cur];
                    k += 1;
                }
                k
            })
            .collect()
    }

    /// Number of elements of each order.
    pub fn order_profile(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for o in self.element_orders() {
            *m.entry(o).or_insert(0) += 1;
        }
        m
    }

    pub fn index_of(&self, op: &AntiunitaryOp) -> Option<usize> {
        self.elements.iter().position(|e| e == op)
    }

    pub fn inverse_of(&self, i: usize) -> Option<usize> {
        self.cayley[i].iter().position(|&k| k == 0)
    }
}

/// Isomorphism class reported for small groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupLabel {
    /// Klein four-group; the D2 ≅ C2v ≅ C2h family.
    D2,
    /// Dihedral group of order 8 (≅ D4).
    C4v,
    /// Elementary abelian group of order 8 (≅ Z2³).
    D2h,
    Q8,
    /// Elementary abelian group of order `2^k` other than D2 and D2h.
    ElementaryAbelian(u32),
    Other {
        order: usize,
        abelian: bool,
        element_orders: BTreeMap<usize, usize>,
    },
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::D2 => write!(f, "D2"),
            Self::C4v => write!(f, "C4v"),
            Self::D2h => write!(f, "D2h"),
            Self::Q8 => write!(f, "Q8"),
            Self::ElementaryAbelian(k) => write!(f, "Z2^{k}"),
            Self::Other {
                order,
                abelian,
                element_orders,
            } => {
                write!(f, "other(order={order}, abelian={abelian}, orders=")?;
                let parts: Vec<String> = element_orders
                    .iter()
                    .map(|(o, c)| format!("{o}:{c}"))
                    .collect();
                write!(f, "{})", parts.join(" "))
            }
        }
    }
}

/// Largest group order [`classify_group`] handles.
pub const MAX_CLASSIFIED_ORDER: usize = 16;

fn label_for(order: usize, abelian: bool, profile: BTreeMap<usize, usize>) -> GroupLabel {
    let involutions = profile.get(&2).copied().unwrap_or(0);
    let all_involutions = involutions + 1 == order;
    match (order, abelian) {
        (4, true) if all_involutions => GroupLabel::D2,
        (8, true) if all_involutions => GroupLabel::D2h,
        (8, false) if involutions == 5 => GroupLabel::C4v,
        (8, false) if involutions == 1 => GroupLabel::Q8,
        (n, true) if all_involutions && n.is_power_of_two() => {
            GroupLabel::ElementaryAbelian(n.trailing_zeros())
        }
        _ => GroupLabel::Other {
            order,
            abelian,
            element_orders: profile,
        },
    }
}

/// Isomorphism class from order, commutativity and the element-order
/// profile. These invariants separate every group of order ≤ 8.
pub fn classify_group(table: &GroupTable) -> Result<GroupLabel> {
    if table.order() > MAX_CLASSIFIED_ORDER {
        return Err(Error::Unsupported(format!(
            "classification of a group of order {} (limit {MAX_CLASSIFIED_ORDER})",
            table.order()
        )));
    }
    Ok(label_for(table.order(), table.is_abelian(), table.order_profile()))
}

/// Closure cap for `N` coordinates: `2 · 2^N · N!`, the size of the signed
/// permutation group times the two choices for `T`.
pub fn closure_cap(n: usize) -> usize {
    let mut cap: usize = 2;
    for k in 1..=n {
        cap = cap.saturating_mul(2 * k);
    }
    cap
}

pub fn close_group(generators: &[AntiunitaryOp]) -> Result<GroupTable> {
    let n = generators
        .first()
        .map(AntiunitaryOp::dim)
        .ok_or_else(|| Error::InvalidChain("close_group needs at least one generator".into()))?;
    close_group_with_cap(generators, closure_cap(n))
}

/// Closes `generators` under composition. Elements are listed identity
/// first, then in breadth-first discovery order.
pub fn close_group_with_cap(generators: &[AntiunitaryOp], cap: usize) -> Result<GroupTable> {
    let n = generators
        .first()
        .map(AntiunitaryOp::dim)
        .ok_or_else(|| Error::InvalidChain("close_group needs at least one generator".into()))?;
    if let Some(bad) = generators.iter().find(|g| g.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: bad.dim(),
        });
    }

    let mut elements = vec![AntiunitaryOp::identity(n)];
    let mut index: HashMap<AntiunitaryOp, usize> = HashMap::new();
    index.insert(elements[0].clone(), 0);
    let push = |op: AntiunitaryOp,
                elements: &mut Vec<AntiunitaryOp>,
                index: &mut HashMap<AntiunitaryOp, usize>|
     -> Result<()> {
        if !index.contains_key(&op) {
            if elements.len() >= cap {
                return Err(Error::GroupTooLarge { cap });
            }
            index.insert(op.clone(), elements.len());
            elements.push(op);
        }
        Ok(())
    };
    for g in generators {
        push(g.clone(), &mut elements, &mut index)?;
    }
    // Right-multiply every element by every generator until nothing new
    // appears; for a finite set this generates the whole group.
    let mut frontier = 0;
    while frontier < elements.len() {
        let e = elements[frontier].clone();
        for g in generators {
            push(e.compose(g)?, &mut elements, &mut index)?;
        }
        frontier += 1;
    }

    let order = elements.len();
    let mut cayley = vec![vec![0; order]; order];
    for i in 0..order {
        for j in 0..order {
            let p = elements[i].compose(&elements[j])?;
            cayley[i][j] = *index
                .get(&p)
                .ok_or_else(|| Error::InvalidChain("group table is not closed".into()))?;
        }
    }
    let mut table = GroupTable {
        elements,
        cayley,
        label: GroupLabel::ElementaryAbelian(0),
    };
    for i in 0..order {
        if table.inverse_of(i).is_none() {
            return Err(Error::InvalidChain(format!(
                "element {} has no inverse",
                table.elements[i]
            )));
        }
    }
    table.label = label_for(order, table.is_abelian(), table.order_profile());
    Ok(table)
}

/// The group `{U1..U4}`.
pub fn g4(n_osc: usize) -> Result<GroupTable> {
    let gens = canonical_generators(n_osc);
    let ops: Vec<AntiunitaryOp> = gens
        .iter()
        .filter(|(k, _)| !k.is_w())
        .map(|(_, s)| AntiunitaryOp::unitary(s.clone()))
        .collect();
    close_group(&ops)
}

/// The group `{U1..U4, W1..W4}`.
pub fn g8(n_osc: usize) -> Result<GroupTable> {
    let ops: Vec<AntiunitaryOp> = canonical_generators(n_osc)
        .into_values()
        .map(AntiunitaryOp::unitary)
        .collect();
    close_group(&ops)
}

/// The antiunitary group `{U1..U4} ∪ {W1 T..W4 T}`.
pub fn antiunitary_group(n_osc: usize) -> Result<GroupTable> {
    let ops: Vec<AntiunitaryOp> = canonical_generators(n_osc)
        .into_iter()
        .map(|(k, s)| {
            if k.is_w() {
                AntiunitaryOp::with_time_reversal(s)
            } else {
                AntiunitaryOp::unitary(s)
            }
        })
        .collect();
    close_group(&ops)
}

/// True iff `a` maps `M(ig)` to itself entrywise within `tol`.
///
/// Intended for operators that include `T`; a purely unitary `a` is applied
/// without conjugation.
pub fn antiunitary_invariance_check(a: &AntiunitaryOp, chain: &OscillatorChain, tol: f64) -> Result<bool> {
    let m = quadratic_form(chain);
    let moved = conjugate_form(&m, &a.unitary_part, a.conjugates)?;
    Ok(moved.max_abs_diff(&m) <= tol)
}
