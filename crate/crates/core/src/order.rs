//! Positivity structures on finitely generated groups: simplicial cones,
//! strict orders, direct sums, quotient orders with lift-finders, ideal-based
//! graded orders, and checkers for the graded axiom, Riesz interpolation /
//! decomposition and (weak) unperforation.
//!
//! Every `yes` carries a certificate that re-verifies by pure arithmetic
//! ([`verify_cert`]). A simplicial `no` is justified by a completed bounded
//! exhaustion with an a-priori coefficient bound derived from a separating
//! functional; when no bound is derivable the answer is `unknown`, never a
//! guess.

use crate::abelian::{FgGroup, GroupElement, GroupHom};
use crate::budget::Budget;
use crate::matrix::{self, IntMat};
use crate::report::{Outcome, Report};
use crate::Int;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrderError {
    #[error("element {0} is not positive")]
    NotPositive(String),
    #[error("map is not surjective, quotient order undefined")]
    NotSurjective,
    #[error("unsupported order representation: {0}")]
    Unsupported(String),
}

/// A positivity structure over an ambient group. Sub-specs apply to
/// coordinate ranges of the ambient, so a spec together with the ambient
/// group fully determines the positive cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderSpec {
    /// Nonnegative integer combinations of the generators.
    SimplicialCone { generators: Vec<GroupElement> },
    /// Positive iff the whole element is zero, or the first `first_dims`
    /// coordinates form a nonzero positive of `base`.
    StrictFirst { first_dims: usize, base: Box<OrderSpec> },
    /// Blockwise positivity over a partition of the coordinates.
    DirectSum { parts: Vec<(Vec<usize>, OrderSpec)> },
    /// Image order of a surjection: positive iff a positive lift exists.
    Quotient { map: GroupHom, source: Box<OrderSpec> },
    /// Graded order `(x, y) >= 0 iff x >= 0 and y in H(I(x))` where the
    /// assignment sends the order ideal of `x` to a subgroup of the odd part.
    IdealGraded { even_dims: usize, even: Box<OrderSpec>, assignment: IdealAssignment },
    /// Conjunction of mapped positivity conditions: positive iff every
    /// `hom(v)` is positive in the paired spec over `hom.target`.
    MappedAll { parts: Vec<(GroupHom, OrderSpec)> },
}

/// How an ideal-graded order assigns subgroups of the odd part to order
/// ideals of the even part: the subgroup generated by the images of the
/// ideal generators under the hom. `ViaHom(id)` is the `I -> I` assignment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IdealAssignment {
    ViaHom(GroupHom),
}

impl OrderSpec {
    /// The coordinatewise order: cone on the unit vectors.
    pub fn standard(group: &FgGroup) -> OrderSpec {
        OrderSpec::SimplicialCone { generators: group.generators() }
    }

    /// Strict order from the first summand with the standard base order.
    pub fn strict_first_standard(even: &FgGroup) -> OrderSpec {
        OrderSpec::StrictFirst {
            first_dims: even.dim(),
            base: Box::new(OrderSpec::standard(even)),
        }
    }
}

/// Result of a positivity query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Positivity {
    Yes(Cert),
    No(Obstruction),
    Unknown { reason: String },
}

impl Positivity {
    pub fn is_yes(&self) -> bool {
        matches!(self, Positivity::Yes(_))
    }
    pub fn is_no(&self) -> bool {
        matches!(self, Positivity::No(_))
    }
    pub fn cert(&self) -> Option<&Cert> {
        match self {
            Positivity::Yes(c) => Some(c),
            _ => None,
        }
    }
}

/// A re-verifiable witness for a positive answer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cert {
    /// The element is zero.
    Zero,
    /// Coefficients of a cone combination, aligned with the generators.
    ConeCombo(Vec<Int>),
    /// The first summand is a nonzero positive with the inner certificate.
    StrictFirst(Box<Cert>),
    /// One certificate per direct summand.
    Blocks(Vec<Cert>),
    /// A positive lift through the quotient map, with its certificate.
    QuotientLift { lift: Vec<Int>, inner: Box<Cert> },
    /// Even certificate plus a membership combination of the odd part over
    /// the ideal-assigned subgroup generators.
    IdealMember { even: Box<Cert>, subgroup_gens: Vec<Vec<Int>>, combo: Vec<Int> },
    /// One certificate per mapped condition.
    All(Vec<Cert>),
}

/// A re-checkable reason for a negative answer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Obstruction {
    /// Completed exhaustion over all combinations with coefficient sum
    /// bounded by `bound` under the stated functional.
    ConeExhausted { functional: Vec<Int>, bound: Int },
    /// The separating functional is negative on the element.
    FunctionalNegative { functional: Vec<Int>, value: Int },
    /// Strict order: first summand vanishes but the rest does not.
    StrictZeroRest,
    /// Strict order: first summand is not positive.
    FirstNotPositive(Box<Obstruction>),
    /// A direct summand failed.
    Block { index: usize, inner: Box<Obstruction> },
    /// No positive lift exists (decided exactly).
    NoPositiveLift,
    /// Element not in the image of the quotient map.
    NoLift,
    /// Odd part is not in the subgroup assigned to the even ideal.
    NotInIdealSubgroup,
    /// A mapped condition failed.
    MappedPart { index: usize, inner: Box<Obstruction> },
    /// Even part of a graded element is not positive.
    EvenNotPositive(Box<Obstruction>),
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::ConeExhausted { bound, .. } => {
                write!(f, "cone exhaustion complete up to coefficient sum {bound}")
            }
            Obstruction::FunctionalNegative { value, .. } => {
                write!(f, "separating functional takes value {value} < 0")
            }
            Obstruction::StrictZeroRest => write!(f, "first summand 0 with nonzero rest"),
            Obstruction::FirstNotPositive(o) => write!(f, "first summand not positive: {o}"),
            Obstruction::Block { index, inner } => write!(f, "block {index}: {inner}"),
            Obstruction::NoPositiveLift => write!(f, "no positive lift"),
            Obstruction::NoLift => write!(f, "no lift at all"),
            Obstruction::NotInIdealSubgroup => write!(f, "odd part outside assigned subgroup"),
            Obstruction::MappedPart { index, inner } => write!(f, "condition {index}: {inner}"),
            Obstruction::EvenNotPositive(o) => write!(f, "even part not positive: {o}"),
        }
    }
}

/// Group formed by a subset of the ambient coordinates.
pub fn subgroup_on(group: &FgGroup, indices: &[usize]) -> FgGroup {
    FgGroup::from_orders(indices.iter().map(|&i| group.orders()[i].clone()).collect())
}

pub fn project_coords(v: &[Int], indices: &[usize]) -> Vec<Int> {
    indices.iter().map(|&i| v[i].clone()).collect()
}

pub fn embed_coords(dim: usize, indices: &[usize], vals: &[Int]) -> Vec<Int> {
    let mut out = vec![Int::zero(); dim];
    for (&i, v) in indices.iter().zip(vals) {
        out[i] = v.clone();
    }
    out
}

fn first_part(group: &FgGroup, first_dims: usize) -> (FgGroup, Vec<usize>) {
    let idx: Vec<usize> = (0..first_dims).collect();
    (subgroup_on(group, &idx), idx)
}

/// Decides positivity of `v` under `spec` over `group`.
pub fn is_positive(group: &FgGroup, spec: &OrderSpec, v: &GroupElement, budget: &Budget) -> Positivity {
    match spec {
        OrderSpec::SimplicialCone { generators } => cone_membership(group, generators, v, budget),
        OrderSpec::StrictFirst { first_dims, base } => {
            if *v == group.zero() {
                return Positivity::Yes(Cert::Zero);
            }
            let (fg, idx) = first_part(group, *first_dims);
            let x = fg.element(&project_coords(&v.coords, &idx)).expect("length");
            if x == fg.zero() {
                return Positivity::No(Obstruction::StrictZeroRest);
            }
            match is_positive(&fg, base, &x, budget) {
                Positivity::Yes(c) => Positivity::Yes(Cert::StrictFirst(Box::new(c))),
                Positivity::No(o) => Positivity::No(Obstruction::FirstNotPositive(Box::new(o))),
                u => u,
            }
        }
        OrderSpec::DirectSum { parts } => {
            let mut certs = Vec::new();
            let mut unknown = None;
            for (i, (idx, part)) in parts.iter().enumerate() {
                let sub = subgroup_on(group, idx);
                let pv = sub.element(&project_coords(&v.coords, idx)).expect("length");
                match is_positive(&sub, part, &pv, budget) {
                    Positivity::Yes(c) => certs.push(c),
                    Positivity::No(o) => {
                        return Positivity::No(Obstruction::Block { index: i, inner: Box::new(o) })
                    }
                    Positivity::Unknown { reason } => unknown = Some(reason),
                }
            }
            match unknown {
                None => Positivity::Yes(Cert::Blocks(certs)),
                Some(reason) => Positivity::Unknown { reason },
            }
        }
        OrderSpec::Quotient { map, source } => quotient_positivity(map, source, v, budget),
        OrderSpec::IdealGraded { even_dims, even, assignment } => {
            ideal_graded_positivity(group, *even_dims, even, assignment, v, budget)
        }
        OrderSpec::MappedAll { parts } => {
            let mut certs = Vec::new();
            let mut unknown = None;
            for (i, (hom, part)) in parts.iter().enumerate() {
                let img = hom.apply(v);
                match is_positive(&hom.target, part, &img, budget) {
                    Positivity::Yes(c) => certs.push(c),
                    Positivity::No(o) => {
                        return Positivity::No(Obstruction::MappedPart { index: i, inner: Box::new(o) })
                    }
                    Positivity::Unknown { reason } => unknown = Some(reason),
                }
            }
            match unknown {
                None => Positivity::Yes(Cert::All(certs)),
                Some(reason) => Positivity::Unknown { reason },
            }
        }
    }
}

/// Free coordinates of the ambient group.
fn free_coords(group: &FgGroup) -> Vec<usize> {
    group
        .orders()
        .iter()
        .enumerate()
        .filter(|(_, d)| d.is_zero())
        .map(|(i, _)| i)
        .collect()
}

/// Search for an integer functional on the free coordinates that is >= 1 on
/// the free part of every generator that touches a free coordinate. Such a
/// functional bounds the total coefficient mass of any cone combination.
fn find_bounding_functional(group: &FgGroup, gens: &[GroupElement]) -> Option<Vec<Int>> {
    let frees = free_coords(group);
    let touching: Vec<&GroupElement> = gens
        .iter()
        .filter(|g| frees.iter().any(|&i| !g.coords[i].is_zero()))
        .collect();
    if touching.is_empty() {
        // all generators are torsion; exact coefficient boxes need no functional
        return Some(vec![Int::zero(); group.dim()]);
    }
    let eval = |phi: &[Int], g: &GroupElement| -> Int {
        frees.iter().map(|&i| &phi[i] * &g.coords[i]).sum()
    };
    let ok = |phi: &[Int]| touching.iter().all(|g| eval(phi, g) >= Int::from(1));

    // all-ones, then unit functionals, then sign patterns over the support
    let mut phi = vec![Int::zero(); group.dim()];
    for &i in &frees {
        phi[i] = Int::from(1);
    }
    if ok(&phi) {
        return Some(phi);
    }
    for &i in &frees {
        let mut phi = vec![Int::zero(); group.dim()];
        phi[i] = Int::from(1);
        if ok(&phi) {
            return Some(phi);
        }
    }
    let support: Vec<usize> = frees
        .iter()
        .copied()
        .filter(|&i| touching.iter().any(|g| !g.coords[i].is_zero()))
        .collect();
    if support.len() > 8 {
        return None;
    }
    let n = support.len();
    let mut digits = vec![0u8; n];
    loop {
        // advance ternary counter; digit values map to 0, 1, -1
        let mut k = 0;
        while k < n {
            digits[k] += 1;
            if digits[k] < 3 {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
        if k == n {
            return None;
        }
        let mut phi = vec![Int::zero(); group.dim()];
        for (d, &i) in digits.iter().zip(&support) {
            phi[i] = match d {
                0 => Int::zero(),
                1 => Int::from(1),
                _ => Int::from(-1),
            };
        }
        if ok(&phi) {
            return Some(phi);
        }
    }
}

/// Decides membership of `v` in the cone generated by `gens` by bounded
/// exhaustive search with an a-priori coefficient bound.
fn cone_membership(group: &FgGroup, gens: &[GroupElement], v: &GroupElement, budget: &Budget) -> Positivity {
    if *v == group.zero() {
        return Positivity::Yes(Cert::Zero);
    }
    // fast path: the standard order, where membership is a sign check
    let frees = free_coords(group);
    let is_standard = gens.len() == group.dim()
        && (0..group.dim()).all(|i| gens[i] == group.basis_element(i));
    if is_standard {
        if frees.iter().all(|&i| !v.coords[i].is_negative()) {
            return Positivity::Yes(Cert::ConeCombo(v.coords.clone()));
        }
        let mut functional = vec![Int::zero(); group.dim()];
        let &bad = frees.iter().find(|&&i| v.coords[i].is_negative()).expect("negative coord");
        functional[bad] = Int::from(1);
        let value = v.coords[bad].clone();
        return Positivity::No(Obstruction::FunctionalNegative { functional, value });
    }

    let Some(phi) = find_bounding_functional(group, gens) else {
        return Positivity::Unknown { reason: "no coefficient bound derivable for cone".into() };
    };
    let phi_of = |coords: &[Int]| -> Int { phi.iter().zip(coords).map(|(p, c)| p * c).sum() };
    let target_mass = phi_of(&v.coords);
    if target_mass.is_negative() {
        return Positivity::No(Obstruction::FunctionalNegative { functional: phi, value: target_mass });
    }
    let Some(bound) = target_mass.to_u64() else {
        return Positivity::Unknown { reason: "cone coefficient bound too large".into() };
    };

    // per-generator coefficient caps: shared functional mass for
    // free-touching generators, exact order boxes for torsion generators
    let caps: Vec<Option<u64>> = gens
        .iter()
        .map(|g| {
            let touches = frees.iter().any(|&i| !g.coords[i].is_zero());
            if touches {
                None
            } else {
                group.element_order(g).to_u64()
            }
        })
        .collect();

    // depth-first search in lexicographic coefficient order; the first hit
    // is the canonical certificate
    fn dfs(
        group: &FgGroup,
        gens: &[GroupElement],
        caps: &[Option<u64>],
        v: &GroupElement,
        budget: &Budget,
        idx: usize,
        mass_left: u64,
        acc: &GroupElement,
        coeffs: &mut Vec<Int>,
    ) -> Result<Option<Vec<Int>>, ()> {
        budget.tick().map_err(|_| ())?;
        if idx == gens.len() {
            return Ok(if acc == v { Some(coeffs.clone()) } else { None });
        }
        let cap = match caps[idx] {
            Some(ord) => ord.saturating_sub(1),
            None => mass_left,
        };
        let mut term = group.zero();
        let mut c = 0u64;
        loop {
            let used_mass = if caps[idx].is_none() { c } else { 0 };
            coeffs.push(Int::from(c));
            let next = group.add(acc, &term);
            if let Some(hit) =
                dfs(group, gens, caps, v, budget, idx + 1, mass_left - used_mass, &next, coeffs)?
            {
                return Ok(Some(hit));
            }
            coeffs.pop();
            if c >= cap {
                return Ok(None);
            }
            c += 1;
            term = group.add(&term, &gens[idx]);
        }
    }

    let mut coeffs = Vec::new();
    match dfs(group, gens, &caps, v, budget, 0, bound, &group.zero(), &mut coeffs) {
        Err(()) => Positivity::Unknown { reason: "budget exhausted in cone search".into() },
        Ok(Some(c)) => Positivity::Yes(Cert::ConeCombo(c)),
        Ok(None) => {
            Positivity::No(Obstruction::ConeExhausted { functional: phi, bound: Int::from(bound) })
        }
    }
}

fn ideal_graded_positivity(
    group: &FgGroup,
    even_dims: usize,
    even: &OrderSpec,
    assignment: &IdealAssignment,
    v: &GroupElement,
    budget: &Budget,
) -> Positivity {
    let (eg, eidx) = first_part(group, even_dims);
    let oidx: Vec<usize> = (even_dims..group.dim()).collect();
    let og = subgroup_on(group, &oidx);
    let x = eg.element(&project_coords(&v.coords, &eidx)).expect("length");
    let w = og.element(&project_coords(&v.coords, &oidx)).expect("length");
    match is_positive(&eg, even, &x, budget) {
        Positivity::No(o) => Positivity::No(Obstruction::EvenNotPositive(Box::new(o))),
        Positivity::Unknown { reason } => Positivity::Unknown { reason },
        Positivity::Yes(ec) => {
            let ideal = match order_ideal(&eg, even, &x, budget) {
                Ok(i) => i,
                Err(e) => return Positivity::Unknown { reason: format!("order ideal: {e}") },
            };
            let IdealAssignment::ViaHom(h) = assignment;
            let sub_gens: Vec<GroupElement> = ideal.iter().map(|g| h.apply(g)).collect();
            match og.in_span(&sub_gens, &w) {
                Some(combo) => Positivity::Yes(Cert::IdealMember {
                    even: Box::new(ec),
                    subgroup_gens: sub_gens.iter().map(|g| g.coords.clone()).collect(),
                    combo,
                }),
                None => Positivity::No(Obstruction::NotInIdealSubgroup),
            }
        }
    }
}

/// Positivity in a quotient order: search for a positive lift. Decides
/// exactly when the kernel is finite or misses the controlling summand of a
/// structured source order; otherwise falls back to a bounded search that
/// can return `unknown`.
fn quotient_positivity(map: &GroupHom, source: &OrderSpec, v: &GroupElement, budget: &Budget) -> Positivity {
    let sg = &map.source;
    let Some(u0) = map.preimage(v) else {
        return Positivity::No(Obstruction::NoLift);
    };
    let kernel = map.kernel_gens();
    if kernel.is_empty() {
        return match is_positive(sg, source, &u0, budget) {
            Positivity::Yes(c) => {
                Positivity::Yes(Cert::QuotientLift { lift: u0.coords, inner: Box::new(c) })
            }
            Positivity::No(_) => Positivity::No(Obstruction::NoPositiveLift),
            u => u,
        };
    }

    // finite kernel: walk the whole fiber
    let kernel_finite = kernel.iter().all(|k| !sg.element_order(k).is_zero());
    if kernel_finite {
        let mut fiber = vec![sg.zero()];
        for k in &kernel {
            let ord = sg.element_order(k).to_u64().unwrap_or(u64::MAX);
            let mut next = Vec::new();
            for f in &fiber {
                let mut acc = f.clone();
                for _ in 0..ord {
                    next.push(acc.clone());
                    acc = sg.add(&acc, k);
                }
            }
            fiber = next;
            if budget.spend(fiber.len() as u64).is_err() {
                return Positivity::Unknown { reason: "budget exhausted enumerating fiber".into() };
            }
        }
        let mut candidates: Vec<GroupElement> = fiber.iter().map(|f| sg.add(&u0, f)).collect();
        candidates.sort();
        candidates.dedup();
        let mut saw_unknown = false;
        for cand in candidates {
            match is_positive(sg, source, &cand, budget) {
                Positivity::Yes(c) => {
                    return Positivity::Yes(Cert::QuotientLift {
                        lift: cand.coords,
                        inner: Box::new(c),
                    })
                }
                Positivity::No(_) => {}
                Positivity::Unknown { .. } => saw_unknown = true,
            }
        }
        return if saw_unknown {
            Positivity::Unknown { reason: "fiber positivity undecided".into() }
        } else {
            Positivity::No(Obstruction::NoPositiveLift)
        };
    }

    // structured path: kernel supported away from the controlling summand
    match source {
        OrderSpec::SimplicialCone { generators }
            if generators.len() == sg.dim()
                && (0..sg.dim()).all(|i| generators[i] == sg.basis_element(i)) =>
        {
            // standard source cone: coordinates untouched by the kernel are
            // fiber-invariant, and coordinates the kernel spans over Z can be
            // zeroed out
            let touched: Vec<usize> = (0..sg.dim())
                .filter(|&i| kernel.iter().any(|kg| !kg.coords[i].is_zero()))
                .collect();
            let frees = free_coords(sg);
            if frees.iter().any(|&i| !touched.contains(&i) && u0.coords[i].is_negative()) {
                return Positivity::No(Obstruction::NoPositiveLift);
            }
            let kmat_t = IntMat::from_rows(
                touched
                    .iter()
                    .map(|&i| kernel.iter().map(|kg| kg.coords[i].clone()).collect())
                    .collect(),
            );
            let spans = if touched.is_empty() {
                true
            } else {
                let snf = matrix::smith_normal_form(&kmat_t);
                snf.rank() == touched.len()
                    && snf.diag().iter().take(touched.len()).all(|d| d == &Int::from(1))
            };
            if spans {
                // zero the touched coordinates of the lift
                let goal: Vec<Int> =
                    touched.iter().map(|&i| -u0.coords[i].clone()).collect();
                if let Some(t) = matrix::solve(&kmat_t, &goal) {
                    let mut lift = u0.clone();
                    for (c, kg) in t.iter().zip(&kernel) {
                        lift = sg.add(&lift, &sg.scale(c, kg));
                    }
                    if let Positivity::Yes(c) = is_positive(sg, source, &lift, budget) {
                        return Positivity::Yes(Cert::QuotientLift {
                            lift: lift.coords,
                            inner: Box::new(c),
                        });
                    }
                }
            }
            // fall through to the bounded search otherwise
        }
        OrderSpec::StrictFirst { first_dims, base } => {
            let kernel_odd_only =
                kernel.iter().all(|k| k.coords[..*first_dims].iter().all(Zero::is_zero));
            if kernel_odd_only {
                let (fg, idx) = first_part(sg, *first_dims);
                let x = fg.element(&project_coords(&u0.coords, &idx)).expect("length");
                if x == fg.zero() {
                    // the only positive with zero first part is zero itself
                    return match sg.in_span(&kernel, &u0) {
                        Some(_) => Positivity::Yes(Cert::QuotientLift {
                            lift: sg.zero().coords,
                            inner: Box::new(Cert::Zero),
                        }),
                        None => Positivity::No(Obstruction::NoPositiveLift),
                    };
                }
                return match is_positive(&fg, base, &x, budget) {
                    Positivity::Yes(c) => Positivity::Yes(Cert::QuotientLift {
                        lift: u0.coords.clone(),
                        inner: Box::new(Cert::StrictFirst(Box::new(c))),
                    }),
                    Positivity::No(_) => Positivity::No(Obstruction::NoPositiveLift),
                    u => u,
                };
            }
        }
        OrderSpec::IdealGraded { even_dims, even, assignment } => {
            let kernel_odd_only =
                kernel.iter().all(|k| k.coords[..*even_dims].iter().all(Zero::is_zero));
            if kernel_odd_only {
                let (eg, eidx) = first_part(sg, *even_dims);
                let oidx: Vec<usize> = (*even_dims..sg.dim()).collect();
                let og = subgroup_on(sg, &oidx);
                let x = eg.element(&project_coords(&u0.coords, &eidx)).expect("length");
                let w0 = og.element(&project_coords(&u0.coords, &oidx)).expect("length");
                match is_positive(&eg, even, &x, budget) {
                    Positivity::No(_) => return Positivity::No(Obstruction::NoPositiveLift),
                    Positivity::Unknown { reason } => return Positivity::Unknown { reason },
                    Positivity::Yes(ec) => {
                        let ideal = match order_ideal(&eg, even, &x, budget) {
                            Ok(i) => i,
                            Err(e) => {
                                return Positivity::Unknown { reason: format!("order ideal: {e}") }
                            }
                        };
                        let IdealAssignment::ViaHom(h) = assignment;
                        let sub_gens: Vec<GroupElement> = ideal.iter().map(|g| h.apply(g)).collect();
                        let kernel_odd: Vec<GroupElement> = kernel
                            .iter()
                            .map(|k| og.element(&project_coords(&k.coords, &oidx)).expect("length"))
                            .collect();
                        // adjust w0 by a kernel combination into the subgroup
                        let mut all_gens = sub_gens.clone();
                        all_gens.extend(kernel_odd.iter().cloned());
                        match og.in_span(&all_gens, &w0) {
                            None => return Positivity::No(Obstruction::NoPositiveLift),
                            Some(combo) => {
                                let sub_combo = combo[..sub_gens.len()].to_vec();
                                let kcombo = &combo[sub_gens.len()..];
                                let mut lift = u0.clone();
                                for (c, k) in kcombo.iter().zip(&kernel) {
                                    lift = sg.sub(&lift, &sg.scale(c, k));
                                }
                                return Positivity::Yes(Cert::QuotientLift {
                                    lift: lift.coords,
                                    inner: Box::new(Cert::IdealMember {
                                        even: Box::new(ec),
                                        subgroup_gens: sub_gens
                                            .iter()
                                            .map(|g| g.coords.clone())
                                            .collect(),
                                        combo: sub_combo,
                                    }),
                                });
                            }
                        }
                    }
                }
            }
        }
        _ => {}
    }

    // bounded fallback: search kernel combinations in a growing box
    let k = kernel.len();
    let mut height: i64 = 0;
    loop {
        let mut coeffs = vec![-height; k];
        loop {
            if budget.tick().is_err() {
                return Positivity::Unknown { reason: "budget exhausted searching lifts".into() };
            }
            // only the shell of the box is new at this height
            if coeffs.iter().any(|c| c.abs() == height) || height == 0 {
                let mut cand = u0.clone();
                for (c, kg) in coeffs.iter().zip(&kernel) {
                    cand = sg.add(&cand, &sg.scale(&Int::from(*c), kg));
                }
                if let Positivity::Yes(c) = is_positive(sg, source, &cand, budget) {
                    return Positivity::Yes(Cert::QuotientLift {
                        lift: cand.coords,
                        inner: Box::new(c),
                    });
                }
            }
            let mut i = 0;
            while i < k {
                coeffs[i] += 1;
                if coeffs[i] <= height {
                    break;
                }
                coeffs[i] = -height;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        height += 1;
    }
}

/// Generators of the smallest order ideal containing the positive element
/// `x`, computed structurally. `I(0)` is the zero ideal (no generators).
pub fn order_ideal(
    group: &FgGroup,
    spec: &OrderSpec,
    x: &GroupElement,
    budget: &Budget,
) -> Result<Vec<GroupElement>, OrderError> {
    if *x == group.zero() {
        return Ok(Vec::new());
    }
    match spec {
        OrderSpec::SimplicialCone { generators } => {
            // independent generators make the combination unique
            let mat = IntMat::from_cols(
                group.dim(),
                &generators.iter().map(|g| g.coords.clone()).collect::<Vec<_>>(),
            );
            let independent = matrix::nullspace(&mat).is_empty();
            if !independent {
                return Err(OrderError::Unsupported("cone generators are dependent".into()));
            }
            match cone_membership(group, generators, x, budget) {
                Positivity::Yes(Cert::ConeCombo(c)) => Ok(generators
                    .iter()
                    .zip(&c)
                    .filter(|(_, ci)| ci.is_positive())
                    .map(|(g, _)| g.clone())
                    .collect()),
                Positivity::Yes(_) => Ok(Vec::new()),
                Positivity::No(_) => Err(OrderError::NotPositive(x.to_string())),
                Positivity::Unknown { reason } => Err(OrderError::Unsupported(reason)),
            }
        }
        OrderSpec::StrictFirst { .. } => {
            // any nonzero positive generates the whole group
            match is_positive(group, spec, x, budget) {
                Positivity::Yes(_) => Ok(group.generators()),
                _ => Err(OrderError::NotPositive(x.to_string())),
            }
        }
        OrderSpec::DirectSum { parts } => {
            let mut gens = Vec::new();
            for (idx, part) in parts {
                let sub = subgroup_on(group, idx);
                let px = sub.element(&project_coords(&x.coords, idx)).expect("length");
                for g in order_ideal(&sub, part, &px, budget)? {
                    gens.push(
                        group.element(&embed_coords(group.dim(), idx, &g.coords)).expect("length"),
                    );
                }
            }
            Ok(gens)
        }
        _ => Err(OrderError::Unsupported(
            "order ideals computed only for simplicial, strict and direct-sum orders".into(),
        )),
    }
}

/// Builds the quotient order along a surjection. The defining feature is
/// positive liftability; [`positive_lift`] recovers lifts on demand.
pub fn quotient_order(map: &GroupHom, source: OrderSpec) -> Result<OrderSpec, OrderError> {
    if !map.is_surjective() {
        return Err(OrderError::NotSurjective);
    }
    Ok(OrderSpec::Quotient { map: map.clone(), source: Box::new(source) })
}

/// A positive lift of `v` through a quotient order, when one exists.
pub fn positive_lift(
    map: &GroupHom,
    source: &OrderSpec,
    v: &GroupElement,
    budget: &Budget,
) -> Option<GroupElement> {
    match quotient_positivity(map, source, v, budget) {
        Positivity::Yes(Cert::QuotientLift { lift, .. }) => {
            Some(map.source.element(&lift).expect("length"))
        }
        _ => None,
    }
}

/// A graded group: even and odd parts with an order on the concatenated
/// coordinates (even first).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedOrderedGroup {
    pub even: FgGroup,
    pub odd: FgGroup,
    pub spec: OrderSpec,
}

impl GradedOrderedGroup {
    pub fn new(even: FgGroup, odd: FgGroup, spec: OrderSpec) -> Self {
        GradedOrderedGroup { even, odd, spec }
    }

    /// Strict order from the even summand, standard base.
    pub fn strict(even: FgGroup, odd: FgGroup) -> Self {
        let spec = OrderSpec::strict_first_standard(&even);
        GradedOrderedGroup { even, odd, spec }
    }

    pub fn ambient(&self) -> FgGroup {
        FgGroup::direct_sum(&[self.even.clone(), self.odd.clone()])
    }

    pub fn pair(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let mut coords = x.coords.clone();
        coords.extend(y.coords.iter().cloned());
        self.ambient().element(&coords).expect("length")
    }

    pub fn split(&self, v: &GroupElement) -> (GroupElement, GroupElement) {
        let ed = self.even.dim();
        (
            self.even.element(&v.coords[..ed]).expect("length"),
            self.odd.element(&v.coords[ed..]).expect("length"),
        )
    }

    pub fn is_positive(&self, v: &GroupElement, budget: &Budget) -> Positivity {
        is_positive(&self.ambient(), &self.spec, v, budget)
    }
}

/// Verifies the graded axiom `(x,y) >= 0 and (x,y') >= 0 imply (x, y +- y') >= 0`
/// over a deterministic bounded enumeration, reporting a witness on failure.
pub fn check_graded(g: &GradedOrderedGroup, max_height: u64, budget: &Budget) -> Report {
    let ambient = g.ambient();
    let elements = crate::abelian::enumerate_elements(&ambient, max_height);
    let mut samples = 0u64;
    let mut report = Report::default();
    for v in &elements {
        if budget.tick().is_err() {
            report.push("graded_axiom", Outcome::BudgetExhausted);
            return report;
        }
        if !is_positive(&ambient, &g.spec, v, budget).is_yes() {
            continue;
        }
        let (x, y) = g.split(v);
        for w in &elements {
            let (x2, y2) = g.split(w);
            if x2 != x || budget.tick().is_err() {
                continue;
            }
            if !is_positive(&ambient, &g.spec, w, budget).is_yes() {
                continue;
            }
            samples += 1;
            let plus = g.pair(&x, &g.odd.add(&y, &y2));
            let minus = g.pair(&x, &g.odd.sub(&y, &y2));
            for (tag, cand) in [("+", &plus), ("-", &minus)] {
                if is_positive(&ambient, &g.spec, cand, budget).is_no() {
                    report.push(
                        "graded_axiom",
                        Outcome::Fail {
                            witness: format!(
                                "({x},{y}) >= 0 and ({x},{y2}) >= 0 but ({x},{y}{tag}{y2}) = {cand} is not positive"
                            ),
                        },
                    );
                    return report;
                }
            }
        }
    }
    report.push("graded_axiom", Outcome::PassBounded { samples });
    report
}

/// Typed witnesses from the order-axiom checker.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct OrderAxioms {
    pub report: Report,
    /// `(m, x)` with `m x >= 0`, `x` not positive.
    pub perforation_witness: Option<(Int, GroupElement)>,
    pub interpolation_witness: Option<Vec<GroupElement>>,
    pub decomposition_witness: Option<Vec<GroupElement>>,
}

/// Checks Riesz interpolation, Riesz decomposition, unperforation and weak
/// unperforation over a deterministic bounded enumeration. Failures carry
/// witnesses; passes are bounded evidence, not proofs.
pub fn check_order_axioms(
    group: &FgGroup,
    spec: &OrderSpec,
    max_height: u64,
    budget: &Budget,
) -> OrderAxioms {
    order_axioms_impl(group, spec, None, max_height, budget)
}

/// Order axioms for a graded group. Interpolation and decomposition are
/// anchored at even elements, the only form the decomposition machinery
/// consumes; a group-wide reading already fails on the strict order of the
/// circle building block.
pub fn check_graded_order_axioms(
    g: &GradedOrderedGroup,
    max_height: u64,
    budget: &Budget,
) -> OrderAxioms {
    order_axioms_impl(&g.ambient(), &g.spec, Some(g.even.dim()), max_height, budget)
}

fn order_axioms_impl(
    group: &FgGroup,
    spec: &OrderSpec,
    even_dims: Option<usize>,
    max_height: u64,
    budget: &Budget,
) -> OrderAxioms {
    let elements = crate::abelian::enumerate_elements(group, max_height);
    let pos: Vec<bool> =
        elements.iter().map(|e| is_positive(group, spec, e, budget).is_yes()).collect();
    let is_even = |e: &GroupElement| -> bool {
        match even_dims {
            None => true,
            Some(ed) => e.coords[ed..].iter().all(Zero::is_zero),
        }
    };
    let leq = |a: &GroupElement, b: &GroupElement| -> bool {
        is_positive(group, spec, &group.sub(b, a), budget).is_yes()
    };
    let mut axioms = OrderAxioms::default();
    let mut samples = 0u64;

    // unperforation and the torsion-tolerant variant, part (i)
    let mut unperforated = Outcome::Pass;
    let mut weakly = Outcome::Pass;
    let torsion = group.torsion_elements();
    'perf: for m in 2i64..=4 {
        let mi = Int::from(m);
        for x in &elements {
            if budget.tick().is_err() {
                unperforated = Outcome::BudgetExhausted;
                break 'perf;
            }
            let mx = group.scale(&mi, x);
            if is_positive(group, spec, &mx, budget).is_yes()
                && !is_positive(group, spec, x, budget).is_yes()
            {
                if matches!(unperforated, Outcome::Pass) {
                    unperforated = Outcome::Fail { witness: format!("m={m}, x={x}") };
                    axioms.perforation_witness = Some((mi.clone(), x.clone()));
                }
                // weak unperforation tolerates a torsion correction killed by m
                let fix = torsion.iter().any(|t| {
                    group.scale(&mi, t) == group.zero()
                        && is_positive(group, spec, &group.add(x, t), budget).is_yes()
                });
                if !fix && matches!(weakly, Outcome::Pass) {
                    weakly = Outcome::Fail { witness: format!("m={m}, x={x}, no torsion fix") };
                }
            }
        }
    }
    // part (ii): ny + t >= 0 with y >= 0, t torsion forces y +- t >= 0
    if matches!(weakly, Outcome::Pass) {
        'part2: for y in &elements {
            if !is_positive(group, spec, y, budget).is_yes() {
                continue;
            }
            for t in &torsion {
                for n in 1i64..=3 {
                    if budget.tick().is_err() {
                        weakly = Outcome::BudgetExhausted;
                        break 'part2;
                    }
                    let nyt = group.add(&group.scale(&Int::from(n), y), t);
                    if is_positive(group, spec, &nyt, budget).is_yes() {
                        let plus = group.add(y, t);
                        let minus = group.sub(y, t);
                        if !is_positive(group, spec, &plus, budget).is_yes()
                            || !is_positive(group, spec, &minus, budget).is_yes()
                        {
                            weakly = Outcome::Fail { witness: format!("y={y}, t={t}, n={n}") };
                            break 'part2;
                        }
                    }
                }
            }
        }
    }
    if matches!(unperforated, Outcome::Pass) {
        unperforated = Outcome::PassBounded { samples: elements.len() as u64 * 3 };
    }
    if matches!(weakly, Outcome::Pass) {
        weakly = Outcome::PassBounded { samples: elements.len() as u64 * 3 };
    }

    // Riesz interpolation (upper bounds drawn from the even part when graded)
    let mut interpolation = Outcome::Pass;
    'interp: for (ia, a1) in elements.iter().enumerate() {
        for a2 in &elements[ia..] {
            for b1 in elements.iter().filter(|e| is_even(e)) {
                if !leq(a1, b1) || !leq(a2, b1) {
                    continue;
                }
                for b2 in elements.iter().filter(|e| is_even(e)) {
                    if budget.tick().is_err() {
                        interpolation = Outcome::BudgetExhausted;
                        break 'interp;
                    }
                    if !leq(a1, b2) || !leq(a2, b2) {
                        continue;
                    }
                    samples += 1;
                    let found = elements
                        .iter()
                        .any(|c| leq(a1, c) && leq(a2, c) && leq(c, b1) && leq(c, b2));
                    if !found {
                        interpolation = Outcome::Fail {
                            witness: format!(
                                "a1={a1}, a2={a2}, b1={b1}, b2={b2}: no interpolant in window"
                            ),
                        };
                        axioms.interpolation_witness =
                            Some(vec![a1.clone(), a2.clone(), b1.clone(), b2.clone()]);
                        break 'interp;
                    }
                }
            }
        }
    }
    if matches!(interpolation, Outcome::Pass) {
        interpolation = Outcome::PassBounded { samples };
    }

    // Riesz decomposition (even data when graded)
    let mut decomposition = Outcome::Pass;
    let positives: Vec<&GroupElement> = elements
        .iter()
        .zip(&pos)
        .filter(|(e, p)| **p && is_even(e))
        .map(|(e, _)| e)
        .collect();
    let mut dec_samples = 0u64;
    'dec: for x in &positives {
        for y1 in &positives {
            for y2 in &positives {
                if budget.tick().is_err() {
                    decomposition = Outcome::BudgetExhausted;
                    break 'dec;
                }
                let ysum = group.add(y1, y2);
                if !leq(x, &ysum) {
                    continue;
                }
                dec_samples += 1;
                let found = positives.iter().any(|x1| {
                    if !leq(x1, y1) {
                        return false;
                    }
                    let x2 = group.sub(x, x1);
                    is_positive(group, spec, &x2, budget).is_yes() && leq(&x2, y2)
                });
                if !found {
                    decomposition = Outcome::Fail {
                        witness: format!("x={x}, y1={y1}, y2={y2}: no decomposition in window"),
                    };
                    axioms.decomposition_witness =
                        Some(vec![(*x).clone(), (*y1).clone(), (*y2).clone()]);
                    break 'dec;
                }
            }
        }
    }
    if matches!(decomposition, Outcome::Pass) {
        decomposition = Outcome::PassBounded { samples: dec_samples };
    }

    axioms.report.push("riesz_interpolation", interpolation);
    axioms.report.push("riesz_decomposition", decomposition);
    axioms.report.push("unperforated", unperforated);
    axioms.report.push("weakly_unperforated", weakly);
    axioms
}

/// Re-verifies a positivity certificate by pure arithmetic.
pub fn verify_cert(group: &FgGroup, spec: &OrderSpec, v: &GroupElement, cert: &Cert) -> bool {
    let budget = Budget::new(1_000_000);
    match (spec, cert) {
        (_, Cert::Zero) => *v == group.zero(),
        (OrderSpec::SimplicialCone { generators }, Cert::ConeCombo(c)) => {
            c.len() == generators.len() && c.iter().all(|ci| !ci.is_negative()) && {
                let mut acc = group.zero();
                for (ci, g) in c.iter().zip(generators) {
                    acc = group.add(&acc, &group.scale(ci, g));
                }
                acc == *v
            }
        }
        (OrderSpec::StrictFirst { first_dims, base }, Cert::StrictFirst(inner)) => {
            let (fg, idx) = first_part(group, *first_dims);
            let x = fg.element(&project_coords(&v.coords, &idx)).expect("length");
            x != fg.zero() && verify_cert(&fg, base, &x, inner)
        }
        (OrderSpec::DirectSum { parts }, Cert::Blocks(cs)) => {
            parts.len() == cs.len()
                && parts.iter().zip(cs).all(|((idx, part), c)| {
                    let sub = subgroup_on(group, idx);
                    let pv = sub.element(&project_coords(&v.coords, idx)).expect("length");
                    verify_cert(&sub, part, &pv, c)
                })
        }
        (OrderSpec::Quotient { map, source }, Cert::QuotientLift { lift, inner }) => {
            let Ok(u) = map.source.element(lift) else { return false };
            map.apply(&u) == *v && verify_cert(&map.source, source, &u, inner)
        }
        (
            OrderSpec::IdealGraded { even_dims, even, assignment },
            Cert::IdealMember { even: ec, subgroup_gens, combo },
        ) => {
            let (eg, eidx) = first_part(group, *even_dims);
            let oidx: Vec<usize> = (*even_dims..group.dim()).collect();
            let og = subgroup_on(group, &oidx);
            let x = eg.element(&project_coords(&v.coords, &eidx)).expect("length");
            let w = og.element(&project_coords(&v.coords, &oidx)).expect("length");
            if !verify_cert(&eg, even, &x, ec) {
                return false;
            }
            let Ok(ideal) = order_ideal(&eg, even, &x, &budget) else { return false };
            let IdealAssignment::ViaHom(h) = assignment;
            let expect: Vec<Vec<Int>> = ideal.iter().map(|g| h.apply(g).coords).collect();
            if expect != *subgroup_gens || combo.len() != subgroup_gens.len() {
                return false;
            }
            let mut acc = og.zero();
            for (c, g) in combo.iter().zip(subgroup_gens) {
                let Ok(ge) = og.element(g) else { return false };
                acc = og.add(&acc, &og.scale(c, &ge));
            }
            acc == w
        }
        (OrderSpec::MappedAll { parts }, Cert::All(cs)) => {
            parts.len() == cs.len()
                && parts
                    .iter()
                    .zip(cs)
                    .all(|((hom, part), c)| verify_cert(&hom.target, part, &hom.apply(v), c))
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::enumerate_elements;
    use crate::{int, ints};

    fn b() -> Budget {
        Budget::new(1_000_000)
    }

    #[test]
    fn strict_first_over_z() {
        let even = FgGroup::free(1);
        let odd = FgGroup::cyclic(7);
        let g = GradedOrderedGroup::strict(even, odd);
        let ambient = g.ambient();
        let yes = ambient.element_i64(&[1, 4]);
        let no = ambient.element_i64(&[0, 3]);
        let zero = ambient.element_i64(&[0, 0]);
        assert!(g.is_positive(&yes, &b()).is_yes());
        assert!(g.is_positive(&no, &b()).is_no());
        assert!(g.is_positive(&zero, &b()).is_yes());
        if let Positivity::Yes(c) = g.is_positive(&yes, &b()) {
            assert!(verify_cert(&ambient, &g.spec, &yes, &c));
        }
    }

    #[test]
    fn simplicial_cone_examples() {
        let z2 = FgGroup::free(2);
        let spec = OrderSpec::SimplicialCone {
            generators: vec![z2.element_i64(&[1, 1]), z2.element_i64(&[1, -1])],
        };
        let yes = z2.element_i64(&[2, 0]);
        match is_positive(&z2, &spec, &yes, &b()) {
            Positivity::Yes(c) => {
                assert_eq!(c, Cert::ConeCombo(ints(&[1, 1])));
                assert!(verify_cert(&z2, &spec, &yes, &c));
            }
            other => panic!("expected yes, got {other:?}"),
        }
        let no = z2.element_i64(&[0, 1]);
        match is_positive(&z2, &spec, &no, &b()) {
            Positivity::No(Obstruction::ConeExhausted { bound, .. }) => {
                assert_eq!(bound, int(0));
            }
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn standard_order_fast_path() {
        let g = FgGroup::free(3);
        let spec = OrderSpec::standard(&g);
        assert!(is_positive(&g, &spec, &g.element_i64(&[0, 2, 5]), &b()).is_yes());
        assert!(is_positive(&g, &spec, &g.element_i64(&[0, -1, 5]), &b()).is_no());
    }

    #[test]
    fn order_ideal_examples() {
        let z = FgGroup::free(1);
        let std1 = OrderSpec::standard(&z);
        let gens = order_ideal(&z, &std1, &z.element_i64(&[1]), &b()).unwrap();
        assert_eq!(gens, vec![z.element_i64(&[1])]);

        let z2 = FgGroup::free(2);
        let std2 = OrderSpec::standard(&z2);
        let gens = order_ideal(&z2, &std2, &z2.element_i64(&[1, 0]), &b()).unwrap();
        assert_eq!(gens, vec![z2.element_i64(&[1, 0])]);

        assert!(order_ideal(&z2, &std2, &z2.zero(), &b()).unwrap().is_empty());
        assert!(matches!(
            order_ideal(&z2, &std2, &z2.element_i64(&[-1, 0]), &b()),
            Err(OrderError::NotPositive(_))
        ));
    }

    #[test]
    fn quotient_order_examples() {
        let z = FgGroup::free(1);
        let z2 = FgGroup::cyclic(2);
        // identity: order unchanged
        let id = GroupHom::identity(&z);
        let q = quotient_order(&id, OrderSpec::standard(&z)).unwrap();
        assert!(is_positive(&z, &q, &z.element_i64(&[3]), &b()).is_yes());
        assert!(is_positive(&z, &q, &z.element_i64(&[-3]), &b()).is_no());
        // reduction Z -> Z/2: everything positive
        let red = GroupHom::new(z.clone(), z2.clone(), IntMat::from_i64(&[&[1]])).unwrap();
        let q = quotient_order(&red, OrderSpec::standard(&z)).unwrap();
        for v in [z2.element_i64(&[0]), z2.element_i64(&[1])] {
            let p = is_positive(&z2, &q, &v, &b());
            assert!(p.is_yes(), "{v} should be positive: {p:?}");
            if let Positivity::Yes(c) = p {
                assert!(verify_cert(&z2, &q, &v, &c));
            }
        }
        // projection Z^2 -> Z with coordinatewise source: standard order
        let zz = FgGroup::free(2);
        let proj = GroupHom::new(zz.clone(), z.clone(), IntMat::from_i64(&[&[1, 0]])).unwrap();
        let q = quotient_order(&proj, OrderSpec::standard(&zz)).unwrap();
        assert!(is_positive(&z, &q, &z.element_i64(&[5]), &b()).is_yes());
        assert!(is_positive(&z, &q, &z.element_i64(&[-5]), &b()).is_no());
        // lift-finder returns an exact positive preimage
        let lift =
            positive_lift(&proj, &OrderSpec::standard(&zz), &z.element_i64(&[5]), &b()).unwrap();
        assert_eq!(proj.apply(&lift), z.element_i64(&[5]));
        assert!(is_positive(&zz, &OrderSpec::standard(&zz), &lift, &b()).is_yes());
        // non-surjective map is rejected
        let emb = GroupHom::new(z.clone(), zz.clone(), IntMat::from_i64(&[&[1], &[0]])).unwrap();
        assert!(matches!(
            quotient_order(&emb, OrderSpec::standard(&z)),
            Err(OrderError::NotSurjective)
        ));
    }

    #[test]
    fn check_graded_pass_and_fail() {
        // strict order over Z with odd part Z/2 passes
        let g = GradedOrderedGroup::strict(FgGroup::free(1), FgGroup::cyclic(2));
        assert!(check_graded(&g, 2, &b()).all_pass());

        // ideal-graded with the identity assignment passes
        let z = FgGroup::free(1);
        let spec = OrderSpec::IdealGraded {
            even_dims: 1,
            even: Box::new(OrderSpec::standard(&z)),
            assignment: IdealAssignment::ViaHom(GroupHom::identity(&z)),
        };
        let g = GradedOrderedGroup::new(z.clone(), z.clone(), spec);
        assert!(check_graded(&g, 2, &b()).all_pass());

        // broken spec: odd positivity tied to the even coordinate fails
        let amb = FgGroup::free(2);
        let broken = OrderSpec::SimplicialCone { generators: vec![amb.element_i64(&[1, 1])] };
        let g = GradedOrderedGroup::new(FgGroup::free(1), FgGroup::free(1), broken);
        let report = check_graded(&g, 2, &b());
        assert!(!report.all_pass());
        let (_, Outcome::Fail { witness }) = report.first_failure().unwrap() else {
            panic!("expected failure")
        };
        assert!(witness.contains("not positive"));
    }

    #[test]
    fn order_axioms_standard_z() {
        let z = FgGroup::free(1);
        let ax = check_order_axioms(&z, &OrderSpec::standard(&z), 3, &b());
        assert!(ax.report.all_pass(), "{}", ax.report);
    }

    #[test]
    fn order_axioms_perforated_cone() {
        // cone {0, 2, 3, 4, ...} on Z, generated by 2 and 3
        let z = FgGroup::free(1);
        let cone = OrderSpec::SimplicialCone {
            generators: vec![z.element_i64(&[2]), z.element_i64(&[3])],
        };
        let ax = check_order_axioms(&z, &cone, 3, &b());
        let (m, x) = ax.perforation_witness.expect("perforation witness");
        assert_eq!((m, x), (int(2), z.element_i64(&[1])));
        assert!(!ax.report.outcome("unperforated").unwrap().is_pass());
        assert!(!ax.report.outcome("weakly_unperforated").unwrap().is_pass());
    }

    #[test]
    fn enumeration_is_deterministic() {
        let g = FgGroup::from_orders(ints(&[0, 2]));
        let a = enumerate_elements(&g, 3);
        let b = enumerate_elements(&g, 3);
        assert_eq!(a, b);
    }
}
