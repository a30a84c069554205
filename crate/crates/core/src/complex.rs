//! n-coefficient complexes: an exact sequence `G0 -> Gn -> G1` with two
//! compatible graded orders, their axiom checker, the three building blocks,
//! direct sums, morphisms, the splitting normal form `Gn = R + B`, and the
//! extension of a graded group to a complex.

use crate::abelian::{bockstein_groups, enumerate_elements, FgGroup, GroupElement, GroupHom};
use crate::budget::Budget;
use crate::matrix::IntMat;
use crate::order::{
    self, check_order_axioms, is_positive, GradedOrderedGroup, IdealAssignment, OrderSpec,
    Positivity,
};
use crate::report::{Outcome, Report};
use crate::Int;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("direct sum requires a nonempty list of summands")]
    EmptySum,
    #[error("direct sum requires equal coefficient moduli, got {0} and {1}")]
    MixedModulus(u64, u64),
    #[error("invalid building block: {0}")]
    BadBlock(String),
    #[error("algebraic axioms fail, no splitting guaranteed: {0}")]
    AxiomsFail(String),
    #[error("no splitting section found: {0}")]
    NoSplitting(String),
    #[error("unsupported representation: {0}")]
    Unsupported(String),
    #[error("even part fails bounded unperforation: {0}")]
    Perforated(String),
}

/// Building-block labels. `DimDrop(m)` requires `m >= 2` and `m | n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockKind {
    C,
    Circle,
    DimDrop(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockLabel {
    pub kind: BlockKind,
    pub n: u64,
}

impl fmt::Display for BlockLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            BlockKind::C => write!(f, "(C,{})", self.n),
            BlockKind::Circle => write!(f, "(S1,{})", self.n),
            BlockKind::DimDrop(m) => write!(f, "(I{m},{})", self.n),
        }
    }
}

/// A triple `(x, y, z)` with `x` in G0, `y` in Gn, `z` in G1.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub x: GroupElement,
    pub y: GroupElement,
    pub z: GroupElement,
}

impl fmt::Debug for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Positivity of a triple is the conjunction of two graded queries.
#[derive(Clone, Debug)]
pub struct TripleCheck {
    pub nat: Positivity,
    pub star: Positivity,
}

impl TripleCheck {
    pub fn is_yes(&self) -> bool {
        self.nat.is_yes() && self.star.is_yes()
    }
    pub fn is_no(&self) -> bool {
        self.nat.is_no() || self.star.is_no()
    }
}

/// The central object: an exact sequence `G0 -> Gn -> G1` with graded orders
/// on `G0 + G1` (star) and `G0 + Gn` (natural), restricting to one order on
/// `G0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NCoefficientComplex {
    pub n: u64,
    pub g0: FgGroup,
    pub gn: FgGroup,
    pub g1: FgGroup,
    pub rho: GroupHom,
    pub beta: GroupHom,
    /// The shared order on `G0` that both graded orders restrict to.
    pub g0_order: OrderSpec,
    pub order_star: GradedOrderedGroup,
    pub order_nat: GradedOrderedGroup,
}

impl NCoefficientComplex {
    pub fn modulus(&self) -> Int {
        Int::from(self.n)
    }

    pub fn zero_triple(&self) -> Triple {
        Triple { x: self.g0.zero(), y: self.gn.zero(), z: self.g1.zero() }
    }

    pub fn triple(&self, x: &[i64], y: &[i64], z: &[i64]) -> Triple {
        Triple {
            x: self.g0.element_i64(x),
            y: self.gn.element_i64(y),
            z: self.g1.element_i64(z),
        }
    }

    pub fn add_triples(&self, a: &Triple, b: &Triple) -> Triple {
        Triple {
            x: self.g0.add(&a.x, &b.x),
            y: self.gn.add(&a.y, &b.y),
            z: self.g1.add(&a.z, &b.z),
        }
    }

    pub fn sum_triples(&self, ts: &[Triple]) -> Triple {
        ts.iter().fold(self.zero_triple(), |acc, t| self.add_triples(&acc, t))
    }

    /// Positivity with certificates: `(x,y) >= 0` in the natural graded
    /// group and `(x,z) >= 0` in the star graded group.
    pub fn is_positive_triple(&self, t: &Triple, budget: &Budget) -> TripleCheck {
        let nat = self.order_nat.is_positive(&self.order_nat.pair(&t.x, &t.y), budget);
        let star = self.order_star.is_positive(&self.order_star.pair(&t.x, &t.z), budget);
        TripleCheck { nat, star }
    }

    /// Deterministic enumeration of the positive triples with coordinate
    /// height at most `max_height`, in graded-lexicographic order.
    pub fn enumerate_positive_triples(&self, max_height: u64, budget: &Budget) -> Vec<Triple> {
        let space = FgGroup::direct_sum(&[self.g0.clone(), self.gn.clone(), self.g1.clone()]);
        let d0 = self.g0.dim();
        let dn = self.gn.dim();
        let mut out = Vec::new();
        for v in enumerate_elements(&space, max_height) {
            if budget.tick().is_err() {
                break;
            }
            let t = Triple {
                x: self.g0.element(&v.coords[..d0]).expect("length"),
                y: self.gn.element(&v.coords[d0..d0 + dn]).expect("length"),
                z: self.g1.element(&v.coords[d0 + dn..]).expect("length"),
            };
            if self.is_positive_triple(&t, budget).is_yes() {
                out.push(t);
            }
        }
        out
    }

    /// The Def 2.1 (v) lift-finder: given `x >= 0` and `y = rho(c')` with
    /// `(x, y)` positive in the natural order, produce `c` with
    /// `rho(c) = y` and `c` in the order ideal `I(x)`.
    pub fn rho_lift(&self, x: &GroupElement, y: &GroupElement, budget: &Budget) -> Option<GroupElement> {
        let map = GroupHom::direct_sum(&[GroupHom::identity(&self.g0), self.rho.clone()]);
        let source = self.rho_quotient_source();
        let pair_group = FgGroup::direct_sum(&[self.g0.clone(), self.gn.clone()]);
        let mut coords = x.coords.clone();
        coords.extend(y.coords.iter().cloned());
        let target = pair_group.element(&coords).expect("length");
        order::positive_lift(&map, &source, &target, budget).map(|lift| {
            self.g0.element(&lift.coords[self.g0.dim()..]).expect("length")
        })
    }

    /// The Def 2.1 (vi) lift-finder: given `(x, z)` star-positive with
    /// `z = beta(y')`, produce `y` with `beta(y) = z` and `(x, y)` positive
    /// in the natural order.
    pub fn beta_lift(&self, x: &GroupElement, z: &GroupElement, budget: &Budget) -> Option<GroupElement> {
        let map = GroupHom::direct_sum(&[GroupHom::identity(&self.g0), self.beta.clone()]);
        let source = self.order_nat.spec.clone();
        let pair_group = FgGroup::direct_sum(&[self.g0.clone(), self.g1.clone()]);
        let mut coords = x.coords.clone();
        coords.extend(z.coords.iter().cloned());
        let target = pair_group.element(&coords).expect("length");
        order::positive_lift(&map, &source, &target, budget).map(|lift| {
            self.gn.element(&lift.coords[self.g0.dim()..]).expect("length")
        })
    }

    /// Source order for the Def 2.1 (v) quotient condition: the ideal-based
    /// graded order on `G0 + G0` with the `I -> I` assignment.
    pub fn rho_quotient_source(&self) -> OrderSpec {
        OrderSpec::IdealGraded {
            even_dims: self.g0.dim(),
            even: Box::new(self.g0_order.clone()),
            assignment: IdealAssignment::ViaHom(GroupHom::identity(&self.g0)),
        }
    }
}

/// Builds one of the three building-block complexes. The graded groups carry
/// the strict order from the first summand.
pub fn building_block(label: BlockLabel) -> Result<NCoefficientComplex, ComplexError> {
    let n = label.n;
    if n < 2 {
        return Err(ComplexError::BadBlock(format!("modulus {n} must be at least 2")));
    }
    let z = FgGroup::free(1);
    let zn = FgGroup::cyclic(n as i64);
    let (gn, g1, rho_m, beta_m) = match label.kind {
        BlockKind::C => {
            let g1 = FgGroup::trivial();
            (zn.clone(), g1, IntMat::from_i64(&[&[1]]), IntMat::zeros(0, 1))
        }
        BlockKind::Circle => {
            let g1 = FgGroup::free(1);
            (zn.clone(), g1, IntMat::from_i64(&[&[1]]), IntMat::from_i64(&[&[0]]))
        }
        BlockKind::DimDrop(m) => {
            if m < 2 {
                return Err(ComplexError::BadBlock(format!("dimension drop {m} must be at least 2")));
            }
            if n % m != 0 {
                return Err(ComplexError::BadBlock(format!("dimension drop {m} must divide {n}")));
            }
            let gn = FgGroup::from_orders(vec![Int::from(n), Int::from(m)]);
            let g1 = FgGroup::cyclic(m as i64);
            (gn, g1, IntMat::from_i64(&[&[1], &[0]]), IntMat::from_i64(&[&[0, 1]]))
        }
    };
    let rho = GroupHom::new(z.clone(), gn.clone(), rho_m).expect("shape");
    let beta = GroupHom::new(gn.clone(), g1.clone(), beta_m).expect("shape");
    Ok(NCoefficientComplex {
        n,
        g0: z.clone(),
        gn: gn.clone(),
        g1: g1.clone(),
        rho,
        beta,
        g0_order: OrderSpec::standard(&z),
        order_star: GradedOrderedGroup::strict(z.clone(), g1),
        order_nat: GradedOrderedGroup::strict(z, gn),
    })
}

/// Coordinate layout of a direct sum: per-summand offsets into the three
/// component groups.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumLayout {
    pub g0: Vec<(usize, usize)>,
    pub gn: Vec<(usize, usize)>,
    pub g1: Vec<(usize, usize)>,
}

impl SumLayout {
    pub fn blocks(&self) -> usize {
        self.g0.len()
    }

    /// Projects a triple of the sum onto summand `b`.
    pub fn project(&self, sum: &NCoefficientComplex, part: &NCoefficientComplex, b: usize, t: &Triple) -> Triple {
        let _ = sum;
        let take = |coords: &[Int], (off, len): (usize, usize)| coords[off..off + len].to_vec();
        Triple {
            x: part.g0.element(&take(&t.x.coords, self.g0[b])).expect("length"),
            y: part.gn.element(&take(&t.y.coords, self.gn[b])).expect("length"),
            z: part.g1.element(&take(&t.z.coords, self.g1[b])).expect("length"),
        }
    }

    /// Embeds a summand triple into the sum (zeros elsewhere).
    pub fn embed(&self, sum: &NCoefficientComplex, b: usize, t: &Triple) -> Triple {
        let put = |dim: usize, (off, _len): (usize, usize), vals: &[Int]| {
            let mut out = vec![Int::zero(); dim];
            for (i, v) in vals.iter().enumerate() {
                out[off + i] = v.clone();
            }
            out
        };
        Triple {
            x: sum.g0.element(&put(sum.g0.dim(), self.g0[b], &t.x.coords)).expect("length"),
            y: sum.gn.element(&put(sum.gn.dim(), self.gn[b], &t.y.coords)).expect("length"),
            z: sum.g1.element(&put(sum.g1.dim(), self.g1[b], &t.z.coords)).expect("length"),
        }
    }
}

/// Componentwise direct sum with the direct-sum order structure.
pub fn direct_sum(parts: &[NCoefficientComplex]) -> Result<(NCoefficientComplex, SumLayout), ComplexError> {
    if parts.is_empty() {
        return Err(ComplexError::EmptySum);
    }
    let n = parts[0].n;
    for p in parts {
        if p.n != n {
            return Err(ComplexError::MixedModulus(n, p.n));
        }
    }
    let g0 = FgGroup::direct_sum(&parts.iter().map(|p| p.g0.clone()).collect::<Vec<_>>());
    let gn = FgGroup::direct_sum(&parts.iter().map(|p| p.gn.clone()).collect::<Vec<_>>());
    let g1 = FgGroup::direct_sum(&parts.iter().map(|p| p.g1.clone()).collect::<Vec<_>>());
    let rho = GroupHom::direct_sum(&parts.iter().map(|p| p.rho.clone()).collect::<Vec<_>>());
    let beta = GroupHom::direct_sum(&parts.iter().map(|p| p.beta.clone()).collect::<Vec<_>>());

    let mut layout = SumLayout::default();
    let (mut o0, mut on, mut o1) = (0, 0, 0);
    for p in parts {
        layout.g0.push((o0, p.g0.dim()));
        layout.gn.push((on, p.gn.dim()));
        layout.g1.push((o1, p.g1.dim()));
        o0 += p.g0.dim();
        on += p.gn.dim();
        o1 += p.g1.dim();
    }

    // graded orders: blockwise over (even_b ++ odd_b) coordinate selections
    let sum_spec = |odd_sel: fn(&SumLayout, usize) -> (usize, usize),
                    specs: Vec<OrderSpec>,
                    even_total: usize|
     -> OrderSpec {
        let mut spec_parts = Vec::new();
        for (b, spec) in specs.into_iter().enumerate() {
            let (e_off, e_len) = layout.g0[b];
            let (od_off, od_len) = odd_sel(&layout, b);
            let mut idx: Vec<usize> = (e_off..e_off + e_len).collect();
            idx.extend(even_total + od_off..even_total + od_off + od_len);
            spec_parts.push((idx, spec));
        }
        OrderSpec::DirectSum { parts: spec_parts }
    };
    let star_spec = sum_spec(
        |l, b| l.g1[b],
        parts.iter().map(|p| p.order_star.spec.clone()).collect(),
        g0.dim(),
    );
    let nat_spec = sum_spec(
        |l, b| l.gn[b],
        parts.iter().map(|p| p.order_nat.spec.clone()).collect(),
        g0.dim(),
    );
    let g0_order = OrderSpec::DirectSum {
        parts: parts
            .iter()
            .enumerate()
            .map(|(b, p)| {
                let (off, len) = layout.g0[b];
                ((off..off + len).collect(), p.g0_order.clone())
            })
            .collect(),
    };

    Ok((
        NCoefficientComplex {
            n,
            g0: g0.clone(),
            gn: gn.clone(),
            g1: g1.clone(),
            rho,
            beta,
            g0_order,
            order_star: GradedOrderedGroup::new(g0.clone(), g1, star_spec),
            order_nat: GradedOrderedGroup::new(g0, gn, nat_spec),
        },
        layout,
    ))
}

fn subgroup_equal(g: &FgGroup, a: &[GroupElement], b: &[GroupElement]) -> Result<(), String> {
    for x in a {
        if g.in_span(b, x).is_none() {
            return Err(format!("{x} not in span of second list"));
        }
    }
    for x in b {
        if g.in_span(a, x).is_none() {
            return Err(format!("{x} not in span of first list"));
        }
    }
    Ok(())
}

/// Checks the seven defining axioms plus exactness. The algebraic parts are
/// decided exactly; order-theoretic parts are bounded evidence with
/// witnesses on failure.
pub fn verify_axioms(x: &NCoefficientComplex, max_height: u64, budget: &Budget) -> Report {
    let mut report = Report::default();
    let n = x.modulus();

    // exactness: im rho = ker beta
    let im_rho = x.rho.image_gens();
    let ker_beta = x.beta.kernel_gens();
    match subgroup_equal(&x.gn, &im_rho, &ker_beta) {
        Ok(()) => report.push("exactness", Outcome::Pass),
        Err(w) => report.push("exactness", Outcome::Fail { witness: w }),
    }

    // (i) n Gn = 0
    let bad = (0..x.gn.dim()).find(|&j| {
        let e = x.gn.basis_element(j);
        x.gn.scale(&n, &e) != x.gn.zero()
    });
    match bad {
        None => report.push("axiom_i", Outcome::Pass),
        Some(j) => report.push(
            "axiom_i",
            Outcome::Fail {
                witness: format!(
                    "generator {} of Gn survives multiplication by {n}",
                    x.gn.basis_element(j)
                ),
            },
        ),
    }

    // (ii) ker rho = n G0 and im beta = G1[n]
    let ker_rho = x.rho.kernel_gens();
    let n_g0: Vec<GroupElement> = (0..x.g0.dim())
        .map(|j| x.g0.scale(&n, &x.g0.basis_element(j)))
        .filter(|e| *e != x.g0.zero())
        .collect();
    match subgroup_equal(&x.g0, &ker_rho, &n_g0) {
        Ok(()) => report.push("axiom_ii_ker_rho", Outcome::Pass),
        Err(w) => report.push("axiom_ii_ker_rho", Outcome::Fail { witness: w }),
    }
    let im_beta = x.beta.image_gens();
    let g1_n = x.g1.torsion_subgroup_gens(&n);
    match subgroup_equal(&x.g1, &im_beta, &g1_n) {
        Ok(()) => report.push("axiom_ii_im_beta", Outcome::Pass),
        Err(w) => report.push("axiom_ii_im_beta", Outcome::Fail { witness: w }),
    }

    // (iii) both graded orders restrict to the declared order on G0
    let mut iii = Outcome::PassBounded { samples: 0 };
    let mut samples = 0;
    for e in enumerate_elements(&x.g0, max_height) {
        if budget.tick().is_err() {
            iii = Outcome::BudgetExhausted;
            break;
        }
        samples += 1;
        let direct = is_positive(&x.g0, &x.g0_order, &e, budget).is_yes();
        let star = x
            .order_star
            .is_positive(&x.order_star.pair(&e, &x.g1.zero()), budget)
            .is_yes();
        let nat = x
            .order_nat
            .is_positive(&x.order_nat.pair(&e, &x.gn.zero()), budget)
            .is_yes();
        if direct != star || direct != nat {
            iii = Outcome::Fail {
                witness: format!("{e}: g0 order {direct}, star restriction {star}, nat restriction {nat}"),
            };
            break;
        }
    }
    if let Outcome::PassBounded { samples: s } = &mut iii {
        *s = samples;
    }
    report.push("axiom_iii", iii);

    // (iv) star has Riesz interpolation, even-anchored for graded groups
    let star_axioms = order::check_graded_order_axioms(&x.order_star, max_height, budget);
    report.push(
        "axiom_iv_riesz_interpolation",
        star_axioms.report.outcome("riesz_interpolation").cloned().unwrap_or(Outcome::BudgetExhausted),
    );

    // (v) quotient-order condition for G0 + rho(G0)
    report.push("axiom_v", quotient_condition_check(x, true, max_height, budget));
    // (vi) quotient-order condition for G0 + beta(Gn)
    report.push("axiom_vi", quotient_condition_check(x, false, max_height, budget));

    // (vii) G0 unperforated, star weakly unperforated
    let g0_axioms = check_order_axioms(&x.g0, &x.g0_order, max_height, budget);
    report.push(
        "axiom_vii_g0_unperforated",
        g0_axioms.report.outcome("unperforated").cloned().unwrap_or(Outcome::BudgetExhausted),
    );
    report.push(
        "axiom_vii_star_weakly_unperforated",
        star_axioms.report.outcome("weakly_unperforated").cloned().unwrap_or(Outcome::BudgetExhausted),
    );

    report
}

/// Checks one of the Def 2.1 (v)/(vi) conditions on a window: restriction
/// positivity coincides with positive liftability, and images of source
/// positives are positive.
fn quotient_condition_check(x: &NCoefficientComplex, rho_side: bool, max_height: u64, budget: &Budget) -> Outcome {
    let (map, source_spec, graded, odd_image): (GroupHom, OrderSpec, &GradedOrderedGroup, Vec<GroupElement>) =
        if rho_side {
            (
                GroupHom::direct_sum(&[GroupHom::identity(&x.g0), x.rho.clone()]),
                x.rho_quotient_source(),
                &x.order_nat,
                x.rho.image_gens(),
            )
        } else {
            (
                GroupHom::direct_sum(&[GroupHom::identity(&x.g0), x.beta.clone()]),
                x.order_nat.spec.clone(),
                &x.order_star,
                x.beta.image_gens(),
            )
        };
    let odd_group = if rho_side { &x.gn } else { &x.g1 };
    let ambient = graded.ambient();
    let mut samples = 0;
    for v in enumerate_elements(&ambient, max_height) {
        if budget.tick().is_err() {
            return Outcome::BudgetExhausted;
        }
        let (e, w) = graded.split(&v);
        // only points of G0 + (odd image) are constrained
        if odd_group.in_span(&odd_image, &w).is_none() {
            continue;
        }
        samples += 1;
        let restricted = graded.is_positive(&v, budget);
        let lifted = is_positive(&map.target, &OrderSpec::Quotient {
            map: map.clone(),
            source: Box::new(source_spec.clone()),
        }, &v, budget);
        match (&restricted, &lifted) {
            (Positivity::Yes(_), Positivity::Yes(_)) | (Positivity::No(_), Positivity::No(_)) => {}
            (Positivity::Unknown { .. }, _) | (_, Positivity::Unknown { .. }) => {
                return Outcome::BudgetExhausted
            }
            _ => {
                return Outcome::Fail {
                    witness: format!(
                        "({e},{w}): restriction positive = {}, positive lift = {}",
                        restricted.is_yes(),
                        lifted.is_yes()
                    ),
                }
            }
        }
    }
    Outcome::PassBounded { samples }
}

/// A morphism of complexes: a triple of group maps commuting with rho and
/// beta and preserving positivity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexMorphism {
    pub theta0: GroupHom,
    pub thetan: GroupHom,
    pub theta1: GroupHom,
}

impl ComplexMorphism {
    pub fn identity(x: &NCoefficientComplex) -> Self {
        ComplexMorphism {
            theta0: GroupHom::identity(&x.g0),
            thetan: GroupHom::identity(&x.gn),
            theta1: GroupHom::identity(&x.g1),
        }
    }

    pub fn apply(&self, t: &Triple) -> Triple {
        Triple {
            x: self.theta0.apply(&t.x),
            y: self.thetan.apply(&t.y),
            z: self.theta1.apply(&t.z),
        }
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &ComplexMorphism) -> ComplexMorphism {
        ComplexMorphism {
            theta0: self.theta0.compose(&first.theta0),
            thetan: self.thetan.compose(&first.thetan),
            theta1: self.theta1.compose(&first.theta1),
        }
    }

    pub fn direct_sum(parts: &[ComplexMorphism]) -> ComplexMorphism {
        ComplexMorphism {
            theta0: GroupHom::direct_sum(&parts.iter().map(|p| p.theta0.clone()).collect::<Vec<_>>()),
            thetan: GroupHom::direct_sum(&parts.iter().map(|p| p.thetan.clone()).collect::<Vec<_>>()),
            theta1: GroupHom::direct_sum(&parts.iter().map(|p| p.theta1.clone()).collect::<Vec<_>>()),
        }
    }

    /// Morphisms sharing one target, summed over the direct sum of their
    /// sources.
    pub fn sum_into(parts: &[ComplexMorphism]) -> ComplexMorphism {
        fn stack(parts: &[ComplexMorphism], pick: fn(&ComplexMorphism) -> &GroupHom) -> GroupHom {
            let target = pick(&parts[0]).target.clone();
            let source = FgGroup::direct_sum(
                &parts.iter().map(|p| pick(p).source.clone()).collect::<Vec<_>>(),
            );
            let mut m = pick(&parts[0]).matrix.clone();
            for p in &parts[1..] {
                assert_eq!(pick(p).target, target, "sum_into needs a common target");
                m = m.hstack(&pick(p).matrix);
            }
            GroupHom::new(source, target, m).expect("shape")
        }
        ComplexMorphism {
            theta0: stack(parts, |p| &p.theta0),
            thetan: stack(parts, |p| &p.thetan),
            theta1: stack(parts, |p| &p.theta1),
        }
    }
}

/// Report plus kernel triple from verifying a morphism.
#[derive(Clone, Debug)]
pub struct MorphismCheck {
    pub report: Report,
    pub kernel0: Vec<GroupElement>,
    pub kerneln: Vec<GroupElement>,
    pub kernel1: Vec<GroupElement>,
}

/// Checks that the squares commute (exactly) and that positivity is
/// preserved on a bounded window of positive triples; returns the kernels.
pub fn verify_morphism(
    m: &ComplexMorphism,
    src: &NCoefficientComplex,
    dst: &NCoefficientComplex,
    max_height: u64,
    budget: &Budget,
) -> MorphismCheck {
    let mut report = Report::default();
    // commuting squares, decided exactly on generators
    let rho_left = dst.rho.compose(&m.theta0);
    let rho_right = m.thetan.compose(&src.rho);
    if rho_left == rho_right {
        report.push("rho_square", Outcome::Pass);
    } else {
        let j = (0..src.g0.dim())
            .find(|&j| {
                let e = src.g0.basis_element(j);
                rho_left.apply(&e) != rho_right.apply(&e)
            })
            .expect("some generator witnesses inequality");
        report.push(
            "rho_square",
            Outcome::Fail { witness: format!("generator {}", src.g0.basis_element(j)) },
        );
    }
    let beta_left = dst.beta.compose(&m.thetan);
    let beta_right = m.theta1.compose(&src.beta);
    if beta_left == beta_right {
        report.push("beta_square", Outcome::Pass);
    } else {
        let j = (0..src.gn.dim())
            .find(|&j| {
                let e = src.gn.basis_element(j);
                beta_left.apply(&e) != beta_right.apply(&e)
            })
            .expect("some generator witnesses inequality");
        report.push(
            "beta_square",
            Outcome::Fail { witness: format!("generator {}", src.gn.basis_element(j)) },
        );
    }
    // positivity on a window
    let mut outcome = Outcome::PassBounded { samples: 0 };
    let mut samples = 0;
    for t in src.enumerate_positive_triples(max_height, budget) {
        if budget.tick().is_err() {
            outcome = Outcome::BudgetExhausted;
            break;
        }
        samples += 1;
        let img = m.apply(&t);
        if dst.is_positive_triple(&img, budget).is_no() {
            outcome = Outcome::Fail { witness: format!("positive {t} maps to non-positive {img}") };
            break;
        }
    }
    if let Outcome::PassBounded { samples: s } = &mut outcome {
        *s = samples;
    }
    report.push("positivity", outcome);

    MorphismCheck {
        report,
        kernel0: m.theta0.kernel_gens(),
        kerneln: m.thetan.kernel_gens(),
        kernel1: m.theta1.kernel_gens(),
    }
}

/// Result of splitting the coefficient group: `Gn = R + B` with
/// `R = G0/nG0`, `B = G1[n]`, the witnessing isomorphism pair, and the
/// normalized complex in which `rho(x) = (x + nG0, 0)` and `beta(r,b) = b`.
#[derive(Clone, Debug)]
pub struct SplitCoefficients {
    pub r_group: FgGroup,
    pub r_quotient: GroupHom,
    pub b_group: FgGroup,
    pub b_into_g1: GroupHom,
    pub iso: GroupHom,
    pub iso_inv: GroupHom,
    pub normalized: NCoefficientComplex,
}

/// Splits `Gn` as `R + B` by finding a complement to the pure subgroup
/// `im rho`. Requires the algebraic axioms; the splitting section is found
/// by exact integer solving.
pub fn split_coefficients(x: &NCoefficientComplex) -> Result<SplitCoefficients, ComplexError> {
    let quick = Budget::new(100_000);
    let pre = verify_axioms(x, 1, &quick);
    for name in ["exactness", "axiom_i", "axiom_ii_ker_rho", "axiom_ii_im_beta"] {
        if let Some(o) = pre.outcome(name) {
            if !o.is_pass() {
                return Err(ComplexError::AxiomsFail(format!("{name}: {o:?}")));
            }
        }
    }
    let n = x.modulus();
    let bock = bockstein_groups(&x.g0, &n);
    let r_group = bock.quotient.clone();
    let r_quotient = bock.quotient_map.clone();

    // quotient Q = Gn / im rho, isomorphic to G1[n] via beta
    let im_rho_rows: Vec<Vec<Int>> = x.rho.image_gens().iter().map(|g| g.coords.clone()).collect();
    let mut rel_rows: Vec<Vec<Int>> = Vec::new();
    for (j, d) in x.gn.orders().iter().enumerate() {
        if !d.is_zero() {
            let mut row = vec![Int::zero(); x.gn.dim()];
            row[j] = d.clone();
            rel_rows.push(row);
        }
    }
    rel_rows.extend(im_rho_rows);
    let rel = if rel_rows.is_empty() {
        IntMat::zeros(0, x.gn.dim())
    } else {
        IntMat::from_rows(rel_rows)
    };
    let (q_group, q_proj) = FgGroup::from_presentation(rel);
    let q_proj = GroupHom::new(x.gn.clone(), q_group.clone(), q_proj.matrix).expect("shape");

    // section s: Q -> Gn with q_proj(s(q)) = q and ord(q) * s(q) = 0
    let mut section_cols: Vec<Vec<Int>> = Vec::new();
    for k in 0..q_group.dim() {
        let qk = q_group.basis_element(k);
        let dk = q_group.element_order(&qk);
        if dk.is_zero() {
            return Err(ComplexError::NoSplitting("quotient has a free generator".into()));
        }
        // solve q_proj(s) = qk together with dk * s = 0 over the integers
        let top = q_proj.matrix.hstack(&q_group.relation_columns());
        let bottom = IntMat::identity(x.gn.dim())
            .scale(&dk)
            .hstack(&x.gn.relation_columns());
        // align the two systems into one stacked matrix over shared unknowns
        let unknowns = x.gn.dim() + q_group.relation_columns().cols() + x.gn.relation_columns().cols();
        let mut mat = IntMat::zeros(q_group.dim() + x.gn.dim(), unknowns);
        for i in 0..q_group.dim() {
            for j in 0..x.gn.dim() {
                mat[(i, j)] = top[(i, j)].clone();
            }
            for j in 0..q_group.relation_columns().cols() {
                mat[(i, x.gn.dim() + j)] = top[(i, x.gn.dim() + j)].clone();
            }
        }
        for i in 0..x.gn.dim() {
            for j in 0..x.gn.dim() {
                mat[(q_group.dim() + i, j)] = bottom[(i, j)].clone();
            }
            for j in 0..x.gn.relation_columns().cols() {
                mat[(q_group.dim() + i, x.gn.dim() + q_group.relation_columns().cols() + j)] =
                    bottom[(i, x.gn.dim() + j)].clone();
            }
        }
        let mut rhs = qk.coords.clone();
        rhs.extend(vec![Int::zero(); x.gn.dim()]);
        let Some(sol) = crate::matrix::solve(&mat, &rhs) else {
            return Err(ComplexError::NoSplitting(format!(
                "no order-preserving section over generator {qk}"
            )));
        };
        section_cols.push(x.gn.element(&sol[..x.gn.dim()]).expect("length").coords);
    }
    let section = GroupHom::new(
        q_group.clone(),
        x.gn.clone(),
        IntMat::from_cols(x.gn.dim(), &section_cols),
    )
    .expect("shape");

    // B is Q relabelled; its inclusion into G1 is beta after the section
    let b_group = q_group.clone();
    let b_into_g1 = x.beta.compose(&section);

    // iso: y -> (r, q) with y - s(q) = rho(u), r = u + nG0
    let mut iso_cols: Vec<Vec<Int>> = Vec::new();
    for j in 0..x.gn.dim() {
        let y = x.gn.basis_element(j);
        let q = q_proj.apply(&y);
        let rest = x.gn.sub(&y, &section.apply(&q));
        let Some(u) = x.gn.solve_mod(&x.rho.matrix, &rest) else {
            return Err(ComplexError::NoSplitting(format!("{rest} not in the image of rho")));
        };
        let r = r_quotient.apply(&x.g0.element(&u).expect("length"));
        let mut col = r.coords.clone();
        col.extend(q.coords);
        iso_cols.push(col);
    }
    let rb = FgGroup::direct_sum(&[r_group.clone(), b_group.clone()]);
    let iso = GroupHom::new(x.gn.clone(), rb.clone(), IntMat::from_cols(rb.dim(), &iso_cols))
        .expect("shape");

    // iso_inv: (r, b) -> rho(lift r) + s(b)
    let mut inv_cols: Vec<Vec<Int>> = Vec::new();
    for j in 0..rb.dim() {
        let e = rb.basis_element(j);
        let r = r_group.element(&e.coords[..r_group.dim()]).expect("length");
        let b = b_group.element(&e.coords[r_group.dim()..]).expect("length");
        let r_lift = r_quotient.preimage(&r).expect("quotient map is surjective");
        let y = x.gn.add(&x.rho.apply(&r_lift), &section.apply(&b));
        inv_cols.push(y.coords);
    }
    let iso_inv = GroupHom::new(rb.clone(), x.gn.clone(), IntMat::from_cols(x.gn.dim(), &inv_cols))
        .expect("shape");

    // round trips must be identities
    if iso.compose(&iso_inv) != GroupHom::identity(&rb)
        || iso_inv.compose(&iso) != GroupHom::identity(&x.gn)
    {
        return Err(ComplexError::NoSplitting("computed maps fail the round trip".into()));
    }

    // normalized complex with transported structure
    let rho_prime = iso.compose(&x.rho);
    let beta_prime = x.beta.compose(&iso_inv);
    // transported formulas, verified on all generators
    for j in 0..x.g0.dim() {
        let e = x.g0.basis_element(j);
        let got = rho_prime.apply(&e);
        let want_r = r_quotient.apply(&e);
        let mut want = want_r.coords.clone();
        want.extend(vec![Int::zero(); b_group.dim()]);
        if got != rb.element(&want).expect("length") {
            return Err(ComplexError::NoSplitting(format!(
                "transported rho deviates from the normal form on {e}"
            )));
        }
    }
    for k in 0..b_group.dim() {
        let mut coords = vec![Int::zero(); rb.dim()];
        coords[r_group.dim() + k] = Int::from(1);
        let e = rb.element(&coords).expect("length");
        if beta_prime.apply(&e) != b_into_g1.apply(&b_group.basis_element(k)) {
            return Err(ComplexError::NoSplitting("transported beta deviates on B".into()));
        }
        // and R dies under the transported beta
    }
    for k in 0..r_group.dim() {
        let mut coords = vec![Int::zero(); rb.dim()];
        coords[k] = Int::from(1);
        let e = rb.element(&coords).expect("length");
        if beta_prime.apply(&e) != x.g1.zero() {
            return Err(ComplexError::NoSplitting("transported beta does not kill R".into()));
        }
    }

    let pair_map = GroupHom::direct_sum(&[GroupHom::identity(&x.g0), iso_inv.clone()]);
    let nat_spec = OrderSpec::MappedAll { parts: vec![(pair_map, x.order_nat.spec.clone())] };
    let normalized = NCoefficientComplex {
        n: x.n,
        g0: x.g0.clone(),
        gn: rb.clone(),
        g1: x.g1.clone(),
        rho: rho_prime,
        beta: beta_prime,
        g0_order: x.g0_order.clone(),
        order_star: x.order_star.clone(),
        order_nat: GradedOrderedGroup::new(x.g0.clone(), rb, nat_spec),
    };

    Ok(SplitCoefficients { r_group, r_quotient, b_group, b_into_g1, iso, iso_inv, normalized })
}

/// Extracts the even-part order from a graded ordered group built from
/// strict or blockwise-strict specs.
pub fn even_restriction(gstar: &GradedOrderedGroup) -> Result<OrderSpec, ComplexError> {
    fn go(spec: &OrderSpec, even_dims: usize) -> Result<OrderSpec, ComplexError> {
        match spec {
            OrderSpec::StrictFirst { first_dims, base } if *first_dims == even_dims => {
                Ok((**base).clone())
            }
            OrderSpec::DirectSum { parts } => {
                let mut even_parts = Vec::new();
                for (idx, part) in parts {
                    let evens: Vec<usize> = idx.iter().copied().filter(|&i| i < even_dims).collect();
                    let inner = go(part, evens.len())?;
                    even_parts.push((evens, inner));
                }
                Ok(OrderSpec::DirectSum { parts: even_parts })
            }
            _ => Err(ComplexError::Unsupported(
                "even restriction derivable only for strict-type orders".into(),
            )),
        }
    }
    go(&gstar.spec, gstar.even.dim())
}

/// Extends a graded ordered group with unperforated even part to a full
/// complex: `Gn = R + B` with the order rule combining the quotient order of
/// `G0 + G0` on `(x, r)` and the star order on `(x, b)`.
pub fn extend_to_complex(
    gstar: &GradedOrderedGroup,
    n: u64,
    budget: &Budget,
) -> Result<NCoefficientComplex, ComplexError> {
    let g0 = gstar.even.clone();
    let g1 = gstar.odd.clone();
    let g0_order = even_restriction(gstar)?;
    let axioms = check_order_axioms(&g0, &g0_order, 2, budget);
    if let Some((m, w)) = &axioms.perforation_witness {
        return Err(ComplexError::Perforated(format!("m={m}, x={w}")));
    }
    let ni = Int::from(n);
    let bock = bockstein_groups(&g0, &ni);
    let r_group = bock.quotient.clone();
    let r_quotient = bock.quotient_map.clone();
    let (b_group, b_into_g1) = g1.subgroup_abstract(&g1.torsion_subgroup_gens(&ni));
    let gn = FgGroup::direct_sum(&[r_group.clone(), b_group.clone()]);

    // rho(x) = (x + nG0, 0); beta(r, b) = b included into G1
    let mut rho_m = IntMat::zeros(gn.dim(), g0.dim());
    for i in 0..r_group.dim() {
        for j in 0..g0.dim() {
            rho_m[(i, j)] = r_quotient.matrix[(i, j)].clone();
        }
    }
    let rho = GroupHom::new(g0.clone(), gn.clone(), rho_m).expect("shape");
    let mut beta_m = IntMat::zeros(g1.dim(), gn.dim());
    for i in 0..g1.dim() {
        for j in 0..b_group.dim() {
            beta_m[(i, r_group.dim() + j)] = b_into_g1.matrix[(i, j)].clone();
        }
    }
    let beta = GroupHom::new(gn.clone(), g1.clone(), beta_m).expect("shape");

    // order on G0 + (R + B): (x,(r,b)) >= 0 iff (x,(r,0)) is positive in the
    // quotient order of G0 + G0 and (x,b) is positive in star
    let g0r = FgGroup::direct_sum(&[g0.clone(), r_group.clone()]);
    let quotient_map = GroupHom::direct_sum(&[GroupHom::identity(&g0), r_quotient.clone()]);
    let ideal_source = OrderSpec::IdealGraded {
        even_dims: g0.dim(),
        even: Box::new(g0_order.clone()),
        assignment: IdealAssignment::ViaHom(GroupHom::identity(&g0)),
    };
    let quotient_spec = OrderSpec::Quotient { map: quotient_map, source: Box::new(ideal_source) };
    // projections out of G0 + R + B
    let ambient = FgGroup::direct_sum(&[g0.clone(), gn.clone()]);
    let mut pi1 = IntMat::zeros(g0r.dim(), ambient.dim());
    for i in 0..g0.dim() {
        pi1[(i, i)] = Int::from(1);
    }
    for i in 0..r_group.dim() {
        pi1[(g0.dim() + i, g0.dim() + i)] = Int::from(1);
    }
    let pi1 = GroupHom::new(ambient.clone(), g0r, pi1).expect("shape");
    let star_ambient = gstar.ambient();
    let mut pi2 = IntMat::zeros(star_ambient.dim(), ambient.dim());
    for i in 0..g0.dim() {
        pi2[(i, i)] = Int::from(1);
    }
    for i in 0..g1.dim() {
        for j in 0..b_group.dim() {
            pi2[(g0.dim() + i, g0.dim() + r_group.dim() + j)] = b_into_g1.matrix[(i, j)].clone();
        }
    }
    let pi2 = GroupHom::new(ambient, star_ambient, pi2).expect("shape");
    let nat_spec = OrderSpec::MappedAll {
        parts: vec![(pi1, quotient_spec), (pi2, gstar.spec.clone())],
    };

    Ok(NCoefficientComplex {
        n,
        g0: g0.clone(),
        gn: gn.clone(),
        g1,
        rho,
        beta,
        g0_order,
        order_star: gstar.clone(),
        order_nat: GradedOrderedGroup::new(g0, gn, nat_spec),
    })
}

/// Bounded bidirectional order-isomorphism comparison: group isomorphisms on
/// the components commuting with rho and beta, with positivity agreement on
/// canonical windows in both directions. A `None` is bounded evidence of
/// failure, not a proof.
pub fn find_complex_iso(
    a: &NCoefficientComplex,
    b: &NCoefficientComplex,
    max_height: u64,
    budget: &Budget,
) -> Option<(ComplexMorphism, ComplexMorphism)> {
    if a.n != b.n {
        return None;
    }
    let same_shape = |x: &FgGroup, y: &FgGroup| {
        x.rank() == y.rank() && x.invariant_factors() == y.invariant_factors()
    };
    if !same_shape(&a.g0, &b.g0) || !same_shape(&a.gn, &b.gn) || !same_shape(&a.g1, &b.g1) {
        return None;
    }

    let cand0 = hom_candidates(&a.g0, &b.g0, budget);
    for theta0 in &cand0 {
        if !is_iso(theta0) {
            continue;
        }
        let candn = hom_candidates(&a.gn, &b.gn, budget);
        for thetan in &candn {
            if !is_iso(thetan) {
                continue;
            }
            if b.rho.compose(theta0) != thetan.compose(&a.rho) {
                continue;
            }
            let cand1 = hom_candidates(&a.g1, &b.g1, budget);
            for theta1 in &cand1 {
                if budget.tick().is_err() {
                    return None;
                }
                if !is_iso(theta1) {
                    continue;
                }
                if b.beta.compose(thetan) != theta1.compose(&a.beta) {
                    continue;
                }
                let fwd = ComplexMorphism {
                    theta0: theta0.clone(),
                    thetan: thetan.clone(),
                    theta1: theta1.clone(),
                };
                let Some(bwd) = invert_morphism(&fwd, a, b) else { continue };
                if windows_agree(a, b, &fwd, max_height, budget)
                    && windows_agree(b, a, &bwd, max_height, budget)
                {
                    return Some((fwd, bwd));
                }
            }
        }
    }
    None
}

fn is_iso(h: &GroupHom) -> bool {
    h.is_well_defined() && h.is_injective() && h.is_surjective()
}

fn invert_morphism(
    m: &ComplexMorphism,
    a: &NCoefficientComplex,
    b: &NCoefficientComplex,
) -> Option<ComplexMorphism> {
    let inv = |h: &GroupHom, src: &FgGroup, dst: &FgGroup| -> Option<GroupHom> {
        let mut cols = Vec::new();
        for j in 0..dst.dim() {
            cols.push(h.preimage(&dst.basis_element(j))?.coords);
        }
        GroupHom::new(dst.clone(), src.clone(), IntMat::from_cols(src.dim(), &cols)).ok()
    };
    Some(ComplexMorphism {
        theta0: inv(&m.theta0, &a.g0, &b.g0)?,
        thetan: inv(&m.thetan, &a.gn, &b.gn)?,
        theta1: inv(&m.theta1, &a.g1, &b.g1)?,
    })
}

/// Candidate homs between small groups: every generator image is drawn from
/// a deterministic window (order-compatible for torsion generators).
fn hom_candidates(src: &FgGroup, dst: &FgGroup, budget: &Budget) -> Vec<GroupHom> {
    let mut per_gen: Vec<Vec<GroupElement>> = Vec::new();
    for j in 0..src.dim() {
        let d = &src.orders()[j];
        let window = enumerate_elements(dst, if d.is_zero() { 1 } else { 2 });
        let mut choices = Vec::new();
        for e in window {
            // well-definedness: d * image = 0
            if d.is_zero() || dst.scale(d, &e) == dst.zero() {
                choices.push(e);
            }
        }
        per_gen.push(choices);
    }
    let mut out = Vec::new();
    let mut stack = vec![0usize; src.dim()];
    'outer: loop {
        if budget.tick().is_err() {
            return out;
        }
        let cols: Vec<Vec<Int>> = stack
            .iter()
            .enumerate()
            .map(|(j, &k)| per_gen[j][k].coords.clone())
            .collect();
        out.push(
            GroupHom::new(src.clone(), dst.clone(), IntMat::from_cols(dst.dim(), &cols))
                .expect("shape"),
        );
        // advance odometer
        for j in 0..src.dim() {
            stack[j] += 1;
            if stack[j] < per_gen[j].len() {
                continue 'outer;
            }
            stack[j] = 0;
        }
        break;
    }
    if src.dim() == 0 {
        out.push(GroupHom::zero(src, dst));
        out.dedup_by(|a, b| a == b);
    }
    out
}

/// One-directional window agreement: positive triples of `a` map to
/// positives of `b`, and non-positives map to non-positives.
fn windows_agree(
    a: &NCoefficientComplex,
    b: &NCoefficientComplex,
    m: &ComplexMorphism,
    max_height: u64,
    budget: &Budget,
) -> bool {
    let space = FgGroup::direct_sum(&[a.g0.clone(), a.gn.clone(), a.g1.clone()]);
    let d0 = a.g0.dim();
    let dn = a.gn.dim();
    for v in enumerate_elements(&space, max_height) {
        if budget.tick().is_err() {
            return false;
        }
        let t = Triple {
            x: a.g0.element(&v.coords[..d0]).expect("length"),
            y: a.gn.element(&v.coords[d0..d0 + dn]).expect("length"),
            z: a.g1.element(&v.coords[d0 + dn..]).expect("length"),
        };
        let here = a.is_positive_triple(&t, budget);
        let there = b.is_positive_triple(&m.apply(&t), budget);
        match (here.is_yes(), here.is_no(), there.is_yes(), there.is_no()) {
            (true, _, _, true) => return false,
            (_, true, true, _) => return false,
            _ => {}
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;

    fn b() -> Budget {
        Budget::new(2_000_000)
    }

    fn block(kind: BlockKind, n: u64) -> NCoefficientComplex {
        building_block(BlockLabel { kind, n }).unwrap()
    }

    #[test]
    fn building_block_shapes() {
        let c2 = block(BlockKind::C, 2);
        assert_eq!(c2.gn.invariant_factors(), vec![int(2)]);
        assert!(c2.g1.is_trivial());
        assert_eq!(c2.rho.apply(&c2.g0.element_i64(&[1])), c2.gn.element_i64(&[1]));

        let i22 = block(BlockKind::DimDrop(2), 2);
        assert_eq!(i22.gn.orders(), &[int(2), int(2)]);
        assert_eq!(i22.rho.apply(&i22.g0.element_i64(&[1])), i22.gn.element_i64(&[1, 0]));
        assert_eq!(i22.beta.apply(&i22.gn.element_i64(&[0, 1])), i22.g1.element_i64(&[1]));
        assert_eq!(i22.beta.apply(&i22.gn.element_i64(&[1, 0])), i22.g1.zero());

        let s13 = block(BlockKind::Circle, 3);
        assert_eq!(s13.gn.invariant_factors(), vec![int(3)]);
        assert_eq!(s13.g1.rank(), 1);
        assert_eq!(s13.beta.apply(&s13.gn.element_i64(&[1])), s13.g1.zero());

        assert!(building_block(BlockLabel { kind: BlockKind::DimDrop(3), n: 4 }).is_err());
        assert!(building_block(BlockLabel { kind: BlockKind::DimDrop(1), n: 4 }).is_err());
    }

    #[test]
    fn blocks_pass_axioms() {
        for kind in [BlockKind::C, BlockKind::Circle, BlockKind::DimDrop(2)] {
            let x = block(kind, 4);
            let report = verify_axioms(&x, 2, &b());
            assert!(report.all_pass(), "{kind:?}:\n{report}");
        }
    }

    #[test]
    fn modulus_mismatch_fails_axiom_i() {
        // Z -> Z/4 -> 0 declared with n = 2
        let mut x = block(BlockKind::C, 4);
        x.n = 2;
        let report = verify_axioms(&x, 2, &b());
        let Outcome::Fail { witness } = report.outcome("axiom_i").unwrap() else {
            panic!("axiom (i) should fail");
        };
        assert!(witness.contains("(1)"), "witness: {witness}");
        // and ker rho = nG0 breaks as well
        assert!(!report.outcome("axiom_ii_ker_rho").unwrap().is_pass());
    }

    #[test]
    fn redirected_beta_breaks_exactness() {
        // (C,2) with G1 = Z/2 and beta the identity on Z/2
        let c2 = block(BlockKind::C, 2);
        let z2 = FgGroup::cyclic(2);
        let beta = GroupHom::new(c2.gn.clone(), z2.clone(), IntMat::from_i64(&[&[1]])).unwrap();
        let x = NCoefficientComplex {
            n: 2,
            g0: c2.g0.clone(),
            gn: c2.gn.clone(),
            g1: z2.clone(),
            rho: c2.rho.clone(),
            beta,
            g0_order: c2.g0_order.clone(),
            order_star: GradedOrderedGroup::strict(c2.g0.clone(), z2),
            order_nat: c2.order_nat.clone(),
        };
        let report = verify_axioms(&x, 2, &b());
        assert!(!report.outcome("exactness").unwrap().is_pass());
    }

    #[test]
    fn direct_sum_examples() {
        let c2 = block(BlockKind::C, 2);
        let (sum, layout) = direct_sum(&[c2.clone(), c2.clone()]).unwrap();
        assert_eq!(sum.g0.rank(), 2);
        assert_eq!(sum.gn.invariant_factors(), vec![int(2), int(2)]);
        assert_eq!(layout.blocks(), 2);
        assert!(verify_axioms(&sum, 2, &b()).all_pass());

        let s13 = block(BlockKind::Circle, 3);
        assert!(matches!(direct_sum(&[c2, s13]), Err(ComplexError::MixedModulus(2, 3))));
        assert!(matches!(direct_sum(&[]), Err(ComplexError::EmptySum)));
    }

    #[test]
    fn positive_triples() {
        let s12 = block(BlockKind::Circle, 2);
        assert!(s12.is_positive_triple(&s12.triple(&[1], &[1], &[5]), &b()).is_yes());
        assert!(s12.is_positive_triple(&s12.triple(&[0], &[1], &[0]), &b()).is_no());
        assert!(s12.is_positive_triple(&s12.triple(&[0], &[0], &[0]), &b()).is_yes());
        // monotone under direct sums: blockwise projections decide
        let (sum, layout) = direct_sum(&[s12.clone(), s12.clone()]).unwrap();
        let t = sum.triple(&[1, 2], &[1, 0], &[3, -1]);
        assert!(sum.is_positive_triple(&t, &b()).is_yes());
        for bidx in 0..2 {
            let p = layout.project(&sum, &s12, bidx, &t);
            assert!(s12.is_positive_triple(&p, &b()).is_yes());
        }
        let bad = sum.triple(&[1, 0], &[0, 1], &[0, 0]);
        assert!(sum.is_positive_triple(&bad, &b()).is_no());
        assert!(s12
            .is_positive_triple(&layout.project(&sum, &s12, 1, &bad), &b())
            .is_no());
    }

    #[test]
    fn morphism_checks() {
        let c2 = block(BlockKind::C, 2);
        let s12 = block(BlockKind::Circle, 2);
        // identity passes with trivial kernels
        let id = ComplexMorphism::identity(&c2);
        let chk = verify_morphism(&id, &c2, &c2, 2, &b());
        assert!(chk.report.all_pass(), "{}", chk.report);
        assert!(chk.kernel0.is_empty() && chk.kerneln.is_empty() && chk.kernel1.is_empty());

        // (C,2) -> (S1,2) with theta1 = 0 passes (both betas vanish)
        let m = ComplexMorphism {
            theta0: GroupHom::identity(&c2.g0),
            thetan: GroupHom::new(c2.gn.clone(), s12.gn.clone(), IntMat::from_i64(&[&[1]])).unwrap(),
            theta1: GroupHom::zero(&c2.g1, &s12.g1),
        };
        assert!(verify_morphism(&m, &c2, &s12, 2, &b()).report.all_pass());

        // (C,2) -> (C,2) with thetan = 0 fails the rho square at generator 1
        let bad = ComplexMorphism {
            theta0: GroupHom::identity(&c2.g0),
            thetan: GroupHom::zero(&c2.gn, &c2.gn),
            theta1: GroupHom::zero(&c2.g1, &c2.g1),
        };
        let chk = verify_morphism(&bad, &c2, &c2, 2, &b());
        let Outcome::Fail { witness } = chk.report.outcome("rho_square").unwrap() else {
            panic!("rho square should fail");
        };
        assert!(witness.contains("(1)"));
    }

    #[test]
    fn split_blocks() {
        // (I2,2): already in normal form, R = Z/2, B = Z/2
        let i22 = block(BlockKind::DimDrop(2), 2);
        let split = split_coefficients(&i22).unwrap();
        assert_eq!(split.r_group.invariant_factors(), vec![int(2)]);
        assert_eq!(split.b_group.invariant_factors(), vec![int(2)]);
        // (S1,2): B = 0 since Z has no 2-torsion
        let s12 = block(BlockKind::Circle, 2);
        let split = split_coefficients(&s12).unwrap();
        assert_eq!(split.r_group.invariant_factors(), vec![int(2)]);
        assert!(split.b_group.is_trivial());
        // (C,3): R = Z/3, B = 0
        let c3 = block(BlockKind::C, 3);
        let split = split_coefficients(&c3).unwrap();
        assert_eq!(split.r_group.invariant_factors(), vec![int(3)]);
        assert!(split.b_group.is_trivial());
    }

    #[test]
    fn extend_matches_blocks() {
        // (Z, Z/2) strict at n = 2 is order-isomorphic to the (I2,2) block
        let gstar = GradedOrderedGroup::strict(FgGroup::free(1), FgGroup::cyclic(2));
        let x = extend_to_complex(&gstar, 2, &b()).unwrap();
        assert!(verify_axioms(&x, 2, &b()).all_pass());
        let i22 = block(BlockKind::DimDrop(2), 2);
        assert!(find_complex_iso(&x, &i22, 2, &b()).is_some());

        // (Z, 0) strict: the (C,2) block
        let gstar = GradedOrderedGroup::strict(FgGroup::free(1), FgGroup::trivial());
        let x = extend_to_complex(&gstar, 2, &b()).unwrap();
        let c2 = block(BlockKind::C, 2);
        assert!(find_complex_iso(&x, &c2, 2, &b()).is_some());

        // (Z, Z) strict: the circle block, B = Z[2] = 0
        let gstar = GradedOrderedGroup::strict(FgGroup::free(1), FgGroup::free(1));
        let x = extend_to_complex(&gstar, 2, &b()).unwrap();
        let s12 = block(BlockKind::Circle, 2);
        assert!(find_complex_iso(&x, &s12, 2, &b()).is_some());
    }

    #[test]
    fn lifts_exist_for_positive_pairs() {
        let i22 = block(BlockKind::DimDrop(2), 2);
        // (vi): (1, 1bar) star-positive with 1bar = beta((0,1))
        let y = i22
            .beta_lift(&i22.g0.element_i64(&[1]), &i22.g1.element_i64(&[1]), &b())
            .expect("beta lift");
        assert_eq!(i22.beta.apply(&y), i22.g1.element_i64(&[1]));
        // (v): rho-lift of (2, rho(2)) stays in I(2) = Z
        let c2 = block(BlockKind::C, 2);
        let c = c2
            .rho_lift(&c2.g0.element_i64(&[2]), &c2.gn.element_i64(&[1]), &b())
            .expect("rho lift");
        assert_eq!(c2.rho.apply(&c), c2.gn.element_i64(&[1]));
    }

    #[test]
    fn degenerate_complex_passes() {
        let zero = FgGroup::trivial();
        let x = NCoefficientComplex {
            n: 2,
            g0: zero.clone(),
            gn: zero.clone(),
            g1: zero.clone(),
            rho: GroupHom::zero(&zero, &zero),
            beta: GroupHom::zero(&zero, &zero),
            g0_order: OrderSpec::standard(&zero),
            order_star: GradedOrderedGroup::strict(zero.clone(), zero.clone()),
            order_nat: GradedOrderedGroup::strict(zero.clone(), zero),
        };
        assert!(verify_axioms(&x, 2, &b()).all_pass());
    }
}
