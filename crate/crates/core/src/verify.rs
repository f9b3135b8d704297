//! Exhaustive checkers for the Mahonian / Hilbertian identities and the
//! `D_n ↔ B_n^+` correspondences.
//!
//! Every check produces a [`VerificationReport`]; a failing report always
//! carries a witness that can be re-checked on its own.

use std::collections::HashMap;
use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::basis::{bplus_basis, validate_basis, weyl_basis, Basis, DecompositionTable, WeylType};
use crate::error::{Error, Result};
use crate::group::{closure, enumerate_group, ColoredPerm, ElementSet, GroupSpec, DEFAULT_CEILING};
use crate::par::Execution;
use crate::stats::{
    bfs_length, coxeter_generators_d, fmaj_polynomial, hilbert_polynomial, in_bplus, in_dn, poincare_polynomial,
    Lengths, QPolynomial,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Polynomials {
        left_name: String,
        left: QPolynomial,
        right_name: String,
        right: QPolynomial,
    },
    Element {
        element: ColoredPerm,
        detail: String,
    },
    /// Two inputs with the same image under a map that should be injective.
    Collision {
        first: ColoredPerm,
        second: ColoredPerm,
        image: ColoredPerm,
    },
    Message {
        detail: String,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Polynomials { left_name, left, right_name, right } => {
                write!(f, "{left_name} = {left}  but  {right_name} = {right}")
            }
            Witness::Element { element, detail } => write!(f, "{element}: {detail}"),
            Witness::Collision { first, second, image } => write!(f, "{first} and {second} both map to {image}"),
            Witness::Message { detail } => write!(f, "{detail}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub property: String,
    pub group: String,
    pub holds: bool,
    /// Number of elements (or relations) examined.
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl VerificationReport {
    fn new(
        property: impl Into<String>,
        group: impl Into<String>,
        checked: u64,
        witness: Option<Witness>,
        started: Instant,
    ) -> Self {
        VerificationReport {
            property: property.into(),
            group: group.into(),
            holds: witness.is_none(),
            checked,
            witness,
            elapsed_ms: Some(started.elapsed().as_millis() as u64),
        }
    }

    /// Drops timing information, for byte-stable output.
    pub fn without_timing(mut self) -> Self {
        self.elapsed_ms = None;
        self
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<32} {:<24} {:<6} checked={}",
            self.property,
            self.group,
            if self.holds { "HOLDS" } else { "FAILS" },
            self.checked
        )?;
        if let Some(ms) = self.elapsed_ms {
            write!(f, " elapsed={ms}ms")?;
        }
        if let Some(w) = &self.witness {
            write!(f, "\n    witness: {w}")?;
        }
        Ok(())
    }
}

fn poly_witness(left_name: &str, left: QPolynomial, right_name: &str, right: QPolynomial) -> Option<Witness> {
    (left != right).then(|| Witness::Polynomials {
        left_name: left_name.into(),
        left,
        right_name: right_name.into(),
        right,
    })
}

/// `Fmaj_(G,a) = Poin_(G,S)`.
pub fn is_mahonian(
    basis: &Basis,
    group: &ElementSet,
    gens: &[ColoredPerm],
    group_name: &str,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let table = validate_basis(basis, group, Execution::Auto)?;
    let fmaj = fmaj_polynomial(basis, &table, group)?;
    let poin = poincare_polynomial(group, gens)?;
    let witness = poly_witness("Fmaj", fmaj, "Poin", poin);
    Ok(VerificationReport::new(
        format!("mahonian[{}]", basis.label()),
        group_name,
        group.len() as u64,
        witness,
        started,
    ))
}

/// `Fmaj_(G,a) = Hilb_{r,p,n}`.
pub fn is_hilbertian(basis: &Basis, spec: &GroupSpec) -> Result<VerificationReport> {
    let started = Instant::now();
    let group = enumerate_group(spec, DEFAULT_CEILING)?;
    let table = validate_basis(basis, &group, Execution::Auto)?;
    let fmaj = fmaj_polynomial(basis, &table, &group)?;
    let witness = poly_witness("Fmaj", fmaj, "Hilb", hilbert_polynomial(spec));
    Ok(VerificationReport::new(
        format!("hilbertian[{}]", basis.label()),
        spec.to_string(),
        group.len() as u64,
        witness,
        started,
    ))
}

/// For Weyl groups: Poincaré series of the Coxeter system equals the Hilbert series.
pub fn weyl_poincare_is_hilbert(kind: WeylType) -> Result<VerificationReport> {
    let started = Instant::now();
    let (spec, gens, name) = match kind {
        WeylType::A(n) => (GroupSpec::new(1, 1, n)?, crate::stats::coxeter_generators_a(n), format!("A_{n}")),
        WeylType::B(n) => (GroupSpec::new(2, 1, n)?, crate::stats::coxeter_generators_b(n), format!("B_{n}")),
        WeylType::D(n) => (GroupSpec::new(2, 2, n)?, coxeter_generators_d(n), format!("D_{n}")),
    };
    let group = enumerate_group(&spec, DEFAULT_CEILING)?;
    let poin = poincare_polynomial(&group, &gens)?;
    let witness = poly_witness("Poin", poin, "Hilb", hilbert_polynomial(&spec));
    Ok(VerificationReport::new("poincare=hilbert", name, group.len() as u64, witness, started))
}

fn sign_at(n: usize, letter: usize) -> ColoredPerm {
    let mut colors = vec![0; n];
    colors[letter] = 1;
    ColoredPerm::new((0..n).collect(), colors, 2).unwrap()
}

/// `v_n = [1, 2, …, -n]`.
pub fn v_n(n: usize) -> ColoredPerm {
    sign_at(n, n - 1)
}

/// `s_0 = [-1, 2, …, n]`.
pub fn s_0(n: usize) -> ColoredPerm {
    sign_at(n, 0)
}

/// `ψ: D_n → B_n^+`, toggling the sign of the last letter of odd-length elements.
pub fn psi(w: &ColoredPerm) -> Result<ColoredPerm> {
    if !in_dn(w) {
        return Err(Error::NotInGroup(format!("{w} (psi is defined on D_n)")));
    }
    Ok(if in_bplus(w) { w.clone() } else { w.mul(&v_n(w.n())) })
}

/// Which branch condition `θ` uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ThetaReading {
    /// `w ↦ w` if `w ∈ D_n`, else `w s_0`.
    #[default]
    Prose,
    /// `w ↦ w` if `w ∈ B_n^+`, else `w s_0`; the identity on `B_n^+`.
    Display,
}

/// `θ: B_n^+ → D_n`, toggling the sign of the first letter.
pub fn theta(w: &ColoredPerm, reading: ThetaReading) -> Result<ColoredPerm> {
    if w.r() != 2 || !in_bplus(w) {
        return Err(Error::NotInGroup(format!("{w} (theta is defined on B_n^+)")));
    }
    let keep = match reading {
        ThetaReading::Prose => in_dn(w),
        ThetaReading::Display => in_bplus(w),
    };
    Ok(if keep { w.clone() } else { w.mul(&s_0(w.n())) })
}

/// `R = {r_1, …, r_{n-1}}` with `r_1 = [2,-1,3,…,n]`, `r_i = [-1,2,…,i+1,i,…,n]`.
pub fn bn_plus_generators(n: usize) -> Vec<ColoredPerm> {
    assert!(n >= 2);
    let mut out = Vec::with_capacity(n - 1);
    let mut w: Vec<i64> = (1..=n as i64).collect();
    w.swap(0, 1);
    w[1] = -1;
    out.push(ColoredPerm::from_signed(&w).unwrap());
    for i in 2..n {
        let mut w: Vec<i64> = (1..=n as i64).collect();
        w[0] = -1;
        w.swap(i - 1, i);
        out.push(ColoredPerm::from_signed(&w).unwrap());
    }
    out
}

/// `R ∪ R⁻¹` without repeats.
pub fn bn_plus_symmetric_generators(n: usize) -> Vec<ColoredPerm> {
    let mut out = bn_plus_generators(n);
    for g in bn_plus_generators(n) {
        let inv = g.inverse();
        if !out.contains(&inv) {
            out.push(inv);
        }
    }
    out
}

/// `B_n`, `D_n` and `B_n^+` for one degree.
pub struct SignedGroups {
    pub n: usize,
    pub bn: ElementSet,
    pub dn: ElementSet,
    pub bplus: ElementSet,
}

impl SignedGroups {
    pub fn new(n: usize) -> Result<Self> {
        let bn = enumerate_group(&GroupSpec::new(2, 1, n)?, DEFAULT_CEILING)?;
        let dn = enumerate_group(&GroupSpec::new(2, 2, n)?, DEFAULT_CEILING)?;
        let bplus = ElementSet::from_vec(bn.iter().filter(|w| in_bplus(w)).cloned().collect());
        Ok(SignedGroups { n, bn, dn, bplus })
    }
}

/// Relations of `R` and `⟨R⟩ = B_n^+`.
pub fn check_bn_plus_relations(n: usize) -> Result<VerificationReport> {
    let started = Instant::now();
    let gens = bn_plus_generators(n);
    let k = gens.len();
    let mut checked = 0u64;
    let mut witness = None;
    let mut expect = |g: ColoredPerm, order: u64, what: String| {
        checked += 1;
        if witness.is_none() && g.order() != order {
            witness = Some(Witness::Element {
                detail: format!("{what}: order {} instead of {order}", g.order()),
                element: g,
            });
        }
    };
    expect(gens[0].clone(), 4, "r_1".into());
    for (i, g) in gens.iter().enumerate().skip(1) {
        expect(g.clone(), 2, format!("r_{}", i + 1));
    }
    for i in 0..k.saturating_sub(1) {
        expect(gens[i].mul(&gens[i + 1]), 3, format!("r_{} r_{}", i + 1, i + 2));
    }
    for i in 0..k {
        for j in i + 2..k {
            expect(gens[i].mul(&gens[j]), 2, format!("r_{} r_{}", i + 1, j + 1));
        }
    }
    if witness.is_none() {
        let groups = SignedGroups::new(n)?;
        let generated = closure(&gens, DEFAULT_CEILING)?;
        checked += generated.len() as u64;
        if generated.len() != groups.bplus.len() {
            witness = Some(Witness::Message {
                detail: format!("<R> has {} elements, B_n^+ has {}", generated.len(), groups.bplus.len()),
            });
        } else if let Some(w) = generated.iter().find(|w| !groups.bplus.contains(w)) {
            witness =
                Some(Witness::Element { element: w.clone(), detail: "generated by R but not of even length".into() });
        }
    }
    Ok(VerificationReport::new("bplus-relations", format!("B_{n}^+"), checked, witness, started))
}

fn d_table(n: usize, groups: &SignedGroups) -> Result<(Basis, DecompositionTable)> {
    let d = weyl_basis(WeylType::D(n))?;
    let t = validate_basis(&d, &groups.dn, Execution::Auto)?;
    Ok((d, t))
}

fn c_table(n: usize, groups: &SignedGroups) -> Result<(Basis, DecompositionTable)> {
    let c = bplus_basis(n)?;
    let t = validate_basis(&c, &groups.bplus, Execution::Auto)?;
    Ok((c, t))
}

/// Unique presentation of `B_n^+` by `(γ_n, …, γ_1)` with moduli `(n, 2(n-1), …, 2)`.
pub fn bplus_presentation(n: usize) -> Result<VerificationReport> {
    let started = Instant::now();
    let groups = SignedGroups::new(n)?;
    let c = bplus_basis(n)?;
    let witness = match validate_basis(&c, &groups.bplus, Execution::Auto) {
        Ok(_) => None,
        Err(Error::NotABasis(w)) => Some(Witness::Message { detail: w.to_string() }),
        Err(e) => return Err(e),
    };
    Ok(VerificationReport::new(
        "bplus-unique-presentation",
        format!("B_{n}^+"),
        groups.bplus.len() as u64,
        witness,
        started,
    ))
}

/// `Fmaj_(B_n^+, c) = Poin_(B_n^+, R ∪ R⁻¹)`.
pub fn bplus_mahonian(n: usize) -> Result<VerificationReport> {
    let groups = SignedGroups::new(n)?;
    let c = bplus_basis(n)?;
    let mut report = is_mahonian(&c, &groups.bplus, &bn_plus_symmetric_generators(n), &format!("B_{n}^+"))?;
    report.property = "bplus-mahonian".into();
    Ok(report)
}

fn injective_onto<F>(domain: &ElementSet, codomain: &ElementSet, map: F) -> Result<Option<Witness>>
where
    F: Fn(&ColoredPerm) -> Result<ColoredPerm>,
{
    let mut seen: HashMap<ColoredPerm, ColoredPerm> = HashMap::new();
    for w in domain {
        let image = map(w)?;
        if !codomain.contains(&image) {
            return Ok(Some(Witness::Element {
                detail: format!("image {image} lies outside the codomain"),
                element: w.clone(),
            }));
        }
        if let Some(prev) = seen.insert(image.clone(), w.clone()) {
            return Ok(Some(Witness::Collision { first: prev, second: w.clone(), image }));
        }
    }
    if seen.len() != codomain.len() {
        return Ok(Some(Witness::Message {
            detail: format!("image has {} elements, codomain {}", seen.len(), codomain.len()),
        }));
    }
    Ok(None)
}

pub fn psi_bijection(n: usize) -> Result<VerificationReport> {
    let started = Instant::now();
    let groups = SignedGroups::new(n)?;
    let witness = injective_onto(&groups.dn, &groups.bplus, psi)?;
    Ok(VerificationReport::new("psi-bijection", format!("D_{n} -> B_{n}^+"), groups.dn.len() as u64, witness, started))
}

pub fn theta_bijection(n: usize, reading: ThetaReading) -> Result<VerificationReport> {
    let started = Instant::now();
    let groups = SignedGroups::new(n)?;
    let witness = injective_onto(&groups.bplus, &groups.dn, |w| theta(w, reading))?;
    Ok(VerificationReport::new(
        format!("theta-bijection[{reading:?}]"),
        format!("B_{n}^+ -> D_{n}"),
        groups.bplus.len() as u64,
        witness,
        started,
    ))
}

/// `fmaj_(D_n, d)(w) = fmaj_(B_n^+, c)(ψ(w))` for every `w ∈ D_n`.
pub fn fmaj_psi_invariance(n: usize) -> Result<VerificationReport> {
    let started = Instant::now();
    let groups = SignedGroups::new(n)?;
    let (_, dt) = d_table(n, &groups)?;
    let (_, ct) = c_table(n, &groups)?;
    let mut witness = None;
    for w in &groups.dn {
        let image = psi(w)?;
        let left = dt.fmaj(w).ok_or_else(|| Error::NotInGroup(w.to_string()))?;
        let right = ct.fmaj(&image).ok_or_else(|| Error::NotInGroup(image.to_string()))?;
        if left != right {
            witness = Some(Witness::Element {
                element: w.clone(),
                detail: format!("fmaj_d = {left} but fmaj_c(psi(w) = {image}) = {right}"),
            });
            break;
        }
    }
    Ok(VerificationReport::new("fmaj-psi-invariance", format!("D_{n}"), groups.dn.len() as u64, witness, started))
}

/// `ℓ_(B_n^+, R ∪ R⁻¹)(w) = ℓ_(D_n, S')(θ(w))` for every `w ∈ B_n^+`.
pub fn length_theta_invariance(n: usize, reading: ThetaReading) -> Result<VerificationReport> {
    let started = Instant::now();
    let groups = SignedGroups::new(n)?;
    let l_plus = bfs_length(&groups.bplus, &bn_plus_symmetric_generators(n))?;
    let l_d = bfs_length(&groups.dn, &coxeter_generators_d(n))?;
    let mut witness = None;
    for (i, w) in groups.bplus.iter().enumerate() {
        let image = theta(w, reading)?;
        let left = l_plus.get(i);
        let right = match l_d.of(&groups.dn, &image) {
            Some(l) => l,
            None => {
                witness = Some(Witness::Element {
                    element: w.clone(),
                    detail: format!("theta(w) = {image} is not in D_{n}"),
                });
                break;
            }
        };
        if left != right {
            witness = Some(Witness::Element {
                element: w.clone(),
                detail: format!("length in B_n^+ = {left} but length of theta(w) = {image} in D_n = {right}"),
            });
            break;
        }
    }
    Ok(VerificationReport::new(
        format!("length-theta-invariance[{reading:?}]"),
        format!("B_{n}^+"),
        groups.bplus.len() as u64,
        witness,
        started,
    ))
}

/// Both parity statements: on `D_n`, `fmaj_d` even iff in `B_n^+`; on `B_n^+`, `fmaj_c` even iff in `D_n`.
pub fn parity_criterion(n: usize) -> Result<VerificationReport> {
    let started = Instant::now();
    let groups = SignedGroups::new(n)?;
    let (_, dt) = d_table(n, &groups)?;
    let (_, ct) = c_table(n, &groups)?;
    let mut witness = None;
    for w in &groups.dn {
        let f = dt.fmaj(w).ok_or_else(|| Error::NotInGroup(w.to_string()))?;
        if (f % 2 == 0) != in_bplus(w) {
            witness = Some(Witness::Element {
                element: w.clone(),
                detail: format!("in D_n with fmaj_d = {f}, in B_n^+: {}", in_bplus(w)),
            });
            break;
        }
    }
    if witness.is_none() {
        for w in &groups.bplus {
            let f = ct.fmaj(w).ok_or_else(|| Error::NotInGroup(w.to_string()))?;
            if (f % 2 == 0) != in_dn(w) {
                witness = Some(Witness::Element {
                    element: w.clone(),
                    detail: format!("in B_n^+ with fmaj_c = {f}, in D_n: {}", in_dn(w)),
                });
                break;
            }
        }
    }
    let checked = (groups.dn.len() + groups.bplus.len()) as u64;
    Ok(VerificationReport::new("parity-criterion", format!("D_{n}, B_{n}^+"), checked, witness, started))
}

/// The six generating functions linking `Fmaj` over `B_n^+` to length over `B_n^+`
/// through `ψ`, `D_n` and `θ`; all must coincide.
pub fn bplus_chain(n: usize) -> Result<(Vec<(String, QPolynomial)>, VerificationReport)> {
    let started = Instant::now();
    let groups = SignedGroups::new(n)?;
    let (_, dt) = d_table(n, &groups)?;
    let (_, ct) = c_table(n, &groups)?;
    let l_plus = bfs_length(&groups.bplus, &bn_plus_symmetric_generators(n))?;
    let l_d = bfs_length(&groups.dn, &coxeter_generators_d(n))?;
    let psi_inv: HashMap<ColoredPerm, ColoredPerm> =
        groups.dn.iter().map(|w| psi(w).map(|p| (p, w.clone()))).collect::<Result<_>>()?;
    let theta_inv: HashMap<ColoredPerm, ColoredPerm> =
        groups.bplus.iter().map(|w| theta(w, ThetaReading::Prose).map(|t| (t, w.clone()))).collect::<Result<_>>()?;
    let lookup = |m: &HashMap<ColoredPerm, ColoredPerm>, g: &ColoredPerm| {
        m.get(g).cloned().ok_or_else(|| Error::Inconsistent(format!("{g} has no preimage")))
    };
    let len_of = |l: &Lengths, set: &ElementSet, g: &ColoredPerm| {
        l.of(set, g).map(u64::from).ok_or_else(|| Error::NotInGroup(g.to_string()))
    };
    let fm = |t: &DecompositionTable, g: &ColoredPerm| t.fmaj(g).ok_or_else(|| Error::NotInGroup(g.to_string()));

    let terms = vec![
        (
            "sum_{B+} q^fmaj_c".to_string(),
            QPolynomial::from_degrees(groups.bplus.iter().map(|g| fm(&ct, g)).collect::<Result<Vec<_>>>()?),
        ),
        (
            "sum_{B+} q^fmaj_d(psi^-1)".to_string(),
            QPolynomial::from_degrees(
                groups.bplus.iter().map(|g| fm(&dt, &lookup(&psi_inv, g)?)).collect::<Result<Vec<_>>>()?,
            ),
        ),
        (
            "sum_{D} q^fmaj_d".to_string(),
            QPolynomial::from_degrees(groups.dn.iter().map(|g| fm(&dt, g)).collect::<Result<Vec<_>>>()?),
        ),
        (
            "sum_{D} q^len_D".to_string(),
            QPolynomial::from_degrees(
                groups.dn.iter().map(|g| len_of(&l_d, &groups.dn, g)).collect::<Result<Vec<_>>>()?,
            ),
        ),
        (
            "sum_{D} q^len_B+(theta^-1)".to_string(),
            QPolynomial::from_degrees(
                groups
                    .dn
                    .iter()
                    .map(|g| len_of(&l_plus, &groups.bplus, &lookup(&theta_inv, g)?))
                    .collect::<Result<Vec<_>>>()?,
            ),
        ),
        (
            "sum_{B+} q^len_B+".to_string(),
            QPolynomial::from_degrees(
                groups.bplus.iter().map(|g| len_of(&l_plus, &groups.bplus, g)).collect::<Result<Vec<_>>>()?,
            ),
        ),
    ];
    let witness = terms
        .windows(2)
        .find(|w| w[0].1 != w[1].1)
        .and_then(|w| poly_witness(&w[0].0, w[0].1.clone(), &w[1].0, w[1].1.clone()));
    let report =
        VerificationReport::new("bplus-chain", format!("B_{n}^+"), groups.bplus.len() as u64, witness, started);
    Ok((terms, report))
}

/// All `ψ`/`θ` checks for one degree.
pub fn psi_theta_suite(n: usize) -> Result<Vec<VerificationReport>> {
    Ok(vec![
        psi_bijection(n)?,
        theta_bijection(n, ThetaReading::Prose)?,
        fmaj_psi_invariance(n)?,
        length_theta_invariance(n, ThetaReading::Prose)?,
        bplus_chain(n)?.1,
    ])
}
