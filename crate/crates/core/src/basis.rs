//! Ordered generating systems ("bases") and unique presentations.
//!
//! A basis `(a_1, …, a_n)` with moduli `(m_1, …, m_n)` presents every group
//! element uniquely as `a_1^{k_1} ⋯ a_n^{k_n}` with `0 <= k_i < m_i`. Elements
//! are always stored in left-to-right multiplication order; the constructors
//! take care of the descending index order the classical bases are written in.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{t_cycle, ColoredPerm, ElementSet, GroupSpec, DEFAULT_CEILING};
use crate::par::Execution;

/// Exponents `(k_1, …, k_n)` of one element against a basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ExponentVector(pub Vec<u64>);

impl ExponentVector {
    pub fn zeros(len: usize) -> Self {
        ExponentVector(vec![0; len])
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Flag major index: the sum of the exponents.
    pub fn sum(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// Which last generator the u-basis uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum RpnVariant {
    /// `c̄_{n-1} = (1,0,…,0,p-1)`.
    #[default]
    Standard,
    /// `c̄_{n-1} = (1,0,…,0,βp-1)` with `gcd(β, r/p) = 1`.
    Beta(i64),
    /// `c̄_{n-1} = 0`, only for `r = p`.
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeylType {
    A(usize),
    B(usize),
    D(usize),
}

/// How a basis was built; decides which decomposition strategies apply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisFamily {
    Symmetric { n: usize },
    Wreath { r: u32, n: usize },
    Rpn { spec: GroupSpec, alpha: u32, variant: RpnVariant },
    Weyl(WeylType),
    BPlus { n: usize },
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    n: usize,
    r: u32,
    elements: Vec<ColoredPerm>,
    moduli: Vec<u64>,
    perfect: bool,
    label: String,
    family: BasisFamily,
}

impl Basis {
    /// A basis candidate over `G(r, n)`; perfectness is computed from element orders.
    pub fn new(
        n: usize,
        r: u32,
        elements: Vec<ColoredPerm>,
        moduli: Vec<u64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if elements.len() != moduli.len() {
            return Err(Error::InvalidElement(format!("{} elements but {} moduli", elements.len(), moduli.len())));
        }
        if moduli.contains(&0) {
            return Err(Error::InvalidElement("moduli must be positive".into()));
        }
        let reference = ColoredPerm::identity(n, r);
        for g in &elements {
            reference.check_same_group(g)?;
        }
        let perfect = elements.iter().zip(&moduli).all(|(g, &m)| g.order() == m);
        Ok(Basis { n, r, elements, moduli, perfect, label: label.into(), family: BasisFamily::Custom })
    }

    fn with_family(mut self, family: BasisFamily) -> Self {
        self.family = family;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn elements(&self) -> &[ColoredPerm] {
        &self.elements
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_perfect(&self) -> bool {
        self.perfect
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn family(&self) -> &BasisFamily {
        &self.family
    }

    pub fn orders(&self) -> Vec<u64> {
        self.elements.iter().map(ColoredPerm::order).collect()
    }

    /// `Π m_i`, or `None` on overflow.
    pub fn product_of_moduli(&self) -> Option<u128> {
        self.moduli.iter().try_fold(1u128, |acc, &m| acc.checked_mul(m as u128))
    }

    pub fn record(&self) -> BasisRecord {
        let (p, alpha, beta, variant) = match &self.family {
            BasisFamily::Rpn { spec, alpha, variant } => {
                let (beta, v) = match variant {
                    RpnVariant::Standard => (None, "standard"),
                    RpnVariant::Beta(b) => (Some(*b), "beta"),
                    RpnVariant::Zero => (None, "zero"),
                };
                (Some(spec.p), Some(*alpha), beta, Some(v))
            }
            _ => (None, None, None, None),
        };
        BasisRecord {
            label: self.label.clone(),
            r: self.r,
            p,
            n: self.n,
            alpha,
            beta,
            variant,
            moduli: self.moduli.clone(),
            orders: self.orders(),
            perfect: self.perfect,
            elements: self.elements.iter().map(ToString::to_string).collect(),
        }
    }
}

/// Flat serializable view of a basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisRecord {
    pub label: String,
    pub r: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<&'static str>,
    pub moduli: Vec<u64>,
    pub orders: Vec<u64>,
    pub perfect: bool,
    pub elements: Vec<String>,
}

impl Serialize for ColoredPerm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn tau(n: usize, r: u32, i: usize) -> ColoredPerm {
    let mut colors = vec![0; n];
    colors[0] = 1 % r;
    ColoredPerm::new(t_cycle(n, i), colors, r).expect("valid tau")
}

/// `(t_{n-1}, …, t_1)` for `S_n`, moduli `(n, …, 2)`.
pub fn sn_basis(n: usize) -> Basis {
    assert!(n >= 1);
    let elements = (1..n).rev().map(|i| ColoredPerm::new(t_cycle(n, i), vec![0; n], 1).unwrap()).collect();
    let moduli = (2..=n as u64).rev().collect();
    Basis::new(n, 1, elements, moduli, format!("t-basis(n={n})")).unwrap().with_family(BasisFamily::Symmetric { n })
}

/// `(τ_{n-1}, …, τ_0)` with `τ_i = ((1,0,…,0); t_i)`, moduli `(rn, …, r)`.
pub fn wreath_basis(r: u32, n: usize) -> Basis {
    assert!(r >= 1 && n >= 1);
    let elements = (0..n).rev().map(|i| tau(n, r, i)).collect();
    let moduli = (1..=n as u64).rev().map(|i| i * r as u64).collect();
    Basis::new(n, r, elements, moduli, format!("tau-basis(r={r},n={n})"))
        .unwrap()
        .with_family(BasisFamily::Wreath { r, n })
}

/// Whether `gcd(r/p, (n-1)αp - n) = 1`.
pub fn alpha_is_valid(spec: &GroupSpec, alpha: u32) -> bool {
    let m = spec.r_over_p() as i64;
    let x = ((spec.n as i64 - 1) * alpha as i64 * spec.p as i64 - spec.n as i64).rem_euclid(m);
    m.gcd(&x) == 1
}

/// Smallest `0 <= α < r/p` with `gcd(r/p, (n-1)αp - n) = 1`.
pub fn select_alpha(spec: &GroupSpec) -> Option<u32> {
    (0..spec.r_over_p()).find(|&a| alpha_is_valid(spec, a))
}

/// The u-basis of `G(r,p,n)` with the smallest admissible α.
pub fn rpn_basis(spec: &GroupSpec, variant: RpnVariant) -> Result<Basis> {
    check_rpn_preconditions(spec, variant)?;
    let alpha = select_alpha(spec)
        .ok_or_else(|| Error::Inconsistent(format!("no admissible alpha for {spec} although gcd(n,p,r/p) = 1")))?;
    rpn_basis_with_alpha(spec, alpha, variant)
}

fn check_rpn_preconditions(spec: &GroupSpec, variant: RpnVariant) -> Result<()> {
    if spec.gcd_flag() != 1 {
        return Err(Error::UnsupportedParameters(format!(
            "{spec}: gcd(n, p, r/p) = {} but the u-basis needs gcd(n, p, r/p) = 1",
            spec.gcd_flag()
        )));
    }
    match variant {
        RpnVariant::Standard => {}
        RpnVariant::Beta(beta) => {
            let m = spec.r_over_p() as i64;
            if beta.gcd(&m) != 1 {
                return Err(Error::UnsupportedParameters(format!(
                    "{spec}: beta = {beta} needs gcd(beta, r/p) = gcd({beta}, {m}) = 1"
                )));
            }
        }
        RpnVariant::Zero => {
            if spec.r != spec.p {
                return Err(Error::UnsupportedParameters(format!("{spec}: the zero variant needs r = p")));
            }
        }
    }
    Ok(())
}

/// The u-basis `(u_{n-1}, …, u_0)` for an explicit α.
pub fn rpn_basis_with_alpha(spec: &GroupSpec, alpha: u32, variant: RpnVariant) -> Result<Basis> {
    check_rpn_preconditions(spec, variant)?;
    if alpha >= spec.r_over_p() || !alpha_is_valid(spec, alpha) {
        return Err(Error::UnsupportedParameters(format!(
            "{spec}: alpha = {alpha} must lie in [0, {}) with gcd(r/p, (n-1)*alpha*p - n) = 1",
            spec.r_over_p()
        )));
    }
    let (r, p, n) = (spec.r, spec.p, spec.n);
    let ri = r as i64;
    let beta = match variant {
        RpnVariant::Beta(b) => b,
        _ => 1,
    };
    let last_color = |x: i64| x.rem_euclid(ri) as u32;
    let mut elements = Vec::with_capacity(n);
    let mut moduli = Vec::with_capacity(n);
    if n == 1 {
        // c̄_0 collapses (1,…,βp-1) onto one coordinate: βp.
        let c = match variant {
            RpnVariant::Zero => 0,
            _ => last_color(beta * p as i64),
        };
        elements.push(ColoredPerm::new(vec![0], vec![c], r)?);
        moduli.push(spec.r_over_p() as u64);
    } else {
        let top = match variant {
            RpnVariant::Zero => vec![0; n],
            _ => {
                let mut c = vec![0; n];
                c[0] = 1 % r;
                c[n - 1] = last_color(beta * p as i64 - 1);
                c
            }
        };
        elements.push(ColoredPerm::new(t_cycle(n, n - 1), top, r)?);
        moduli.push(n as u64 * spec.r_over_p() as u64);
        for i in (0..n - 1).rev() {
            let mut c = vec![0; n];
            c[0] = 1 % r;
            c[n - 1] = last_color(alpha as i64 * p as i64 - 1);
            elements.push(ColoredPerm::new(t_cycle(n, i), c, r)?);
            moduli.push((i as u64 + 1) * r as u64);
        }
    }
    let suffix = match variant {
        RpnVariant::Standard => String::new(),
        RpnVariant::Beta(b) => format!(",beta={b}"),
        RpnVariant::Zero => ",zero".to_string(),
    };
    let label = format!("u-basis(r={r},p={p},n={n},alpha={alpha}{suffix})");
    Ok(Basis::new(n, r, elements, moduli, label)?.with_family(BasisFamily::Rpn { spec: *spec, alpha, variant }))
}

fn signed(window: Vec<i64>) -> ColoredPerm {
    ColoredPerm::from_signed(&window).expect("valid signed window")
}

/// `β_i = [-i, 1, 2, …, i-1, i+1, …, n]`.
pub(crate) fn beta_element(n: usize, i: usize) -> ColoredPerm {
    let mut w = vec![-(i as i64)];
    w.extend((1..i as i64).chain(i as i64 + 1..=n as i64));
    signed(w)
}

/// `δ_i = [-i, 1, …, i-1, i+1, …, -n]` for `i < n`, and `δ_n = [n, 1, …, n-1]`.
pub(crate) fn delta_element(n: usize, i: usize) -> ColoredPerm {
    let n_ = n as i64;
    if i == n {
        let mut w = vec![n_];
        w.extend(1..n_);
        return signed(w);
    }
    let mut w = vec![-(i as i64)];
    w.extend((1..i as i64).chain(i as i64 + 1..n_));
    w.push(-n_);
    signed(w)
}

/// The classical bases `a`, `b`, `d` for `S_n`, `B_n`, `D_n`.
pub fn weyl_basis(kind: WeylType) -> Result<Basis> {
    let basis = match kind {
        WeylType::A(n) => {
            if n < 2 {
                return Err(Error::UnsupportedParameters("type A needs n >= 2".into()));
            }
            // α_i = (i, i-1, …, 1) = t_{i-1}
            let elements = (2..=n).rev().map(|i| ColoredPerm::new(t_cycle(n, i - 1), vec![0; n], 1).unwrap()).collect();
            Basis::new(n, 1, elements, (2..=n as u64).rev().collect(), format!("a-basis(n={n})"))?
        }
        WeylType::B(n) => {
            if n < 1 {
                return Err(Error::UnsupportedParameters("type B needs n >= 1".into()));
            }
            let elements = (1..=n).rev().map(|i| beta_element(n, i)).collect();
            let moduli = (1..=n as u64).rev().map(|i| 2 * i).collect();
            Basis::new(n, 2, elements, moduli, format!("b-basis(n={n})"))?
        }
        WeylType::D(n) => {
            if n < 2 {
                return Err(Error::UnsupportedParameters("type D needs n >= 2".into()));
            }
            let elements = (1..=n).rev().map(|i| delta_element(n, i)).collect();
            let moduli = d_moduli(n);
            Basis::new(n, 2, elements, moduli, format!("d-basis(n={n})"))?
        }
    };
    Ok(basis.with_family(BasisFamily::Weyl(kind)))
}

fn d_moduli(n: usize) -> Vec<u64> {
    std::iter::once(n as u64).chain((1..n as u64).rev().map(|i| 2 * i)).collect()
}

/// `(γ_n, …, γ_1)` with `γ_i = ψ(δ_i)`, moduli `(n, 2(n-1), …, 2)`; perfect iff `n` is odd.
pub fn bplus_basis(n: usize) -> Result<Basis> {
    if n < 2 {
        return Err(Error::UnsupportedParameters("B_n^+ needs n >= 2".into()));
    }
    let elements = (1..=n).rev().map(|i| crate::verify::psi(&delta_element(n, i))).collect::<Result<Vec<_>>>()?;
    Ok(Basis::new(n, 2, elements, d_moduli(n), format!("gamma-basis(n={n})"))?.with_family(BasisFamily::BPlus { n }))
}

/// Why a candidate is not a basis of the given group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FailureWitness {
    /// Two exponent vectors with the same product.
    Collision {
        element: ColoredPerm,
        first: ExponentVector,
        second: ExponentVector,
    },
    OutsideGroup {
        element: ColoredPerm,
        exponents: ExponentVector,
    },
    /// All products distinct and inside, but they do not exhaust the group.
    CountMismatch {
        products: u64,
        group_order: u64,
    },
}

impl fmt::Display for FailureWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureWitness::Collision { element, first, second } => {
                write!(f, "exponents {first} and {second} both give {element}")
            }
            FailureWitness::OutsideGroup { element, exponents } => {
                write!(f, "exponents {exponents} give {element}, which is outside the group")
            }
            FailureWitness::CountMismatch { products, group_order } => {
                write!(f, "{products} distinct products for a group of order {group_order}")
            }
        }
    }
}

/// Element → exponent-vector map of a validated basis.
#[derive(Clone, Debug)]
pub struct DecompositionTable {
    moduli: Vec<u64>,
    ranks: HashMap<ColoredPerm, u64>,
}

impl DecompositionTable {
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn get(&self, g: &ColoredPerm) -> Option<ExponentVector> {
        self.ranks.get(g).map(|&rank| unrank(&self.moduli, rank))
    }

    pub fn fmaj(&self, g: &ColoredPerm) -> Option<u64> {
        self.get(g).map(|k| k.sum())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ColoredPerm, ExponentVector)> + '_ {
        self.ranks.iter().map(|(g, &rank)| (g, unrank(&self.moduli, rank)))
    }
}

/// Mixed-radix rank with `k_1` most significant.
fn unrank(moduli: &[u64], mut rank: u64) -> ExponentVector {
    let mut ks = vec![0; moduli.len()];
    for (slot, &m) in ks.iter_mut().zip(moduli).rev() {
        *slot = rank % m;
        rank /= m;
    }
    ExponentVector(ks)
}

/// All products `a_1^{k_1} ⋯ a_n^{k_n}`, indexed by rank.
fn all_products(basis: &Basis, exec: Execution, ceiling: u64) -> Result<Vec<ColoredPerm>> {
    let total = basis.product_of_moduli().filter(|&t| t <= ceiling as u128).ok_or_else(|| Error::TooLarge {
        size: basis.product_of_moduli().map_or("overflow".into(), |t| t.to_string()),
        ceiling,
    })?;
    let id = ColoredPerm::identity(basis.n, basis.r);
    if basis.is_empty() {
        return Ok(vec![id]);
    }
    let powers: Vec<Vec<ColoredPerm>> = basis
        .elements
        .iter()
        .zip(&basis.moduli)
        .map(|(a, &m)| {
            let mut out = Vec::with_capacity(m as usize);
            let mut x = id.clone();
            for _ in 0..m {
                out.push(x.clone());
                x = x.mul(a);
            }
            out
        })
        .collect();
    // suffix products over a_2..a_n, lexicographic in (k_2, …, k_n)
    let mut suffix = vec![id];
    for pw in powers[1..].iter().rev() {
        let mut next = Vec::with_capacity(suffix.len() * pw.len());
        for x in pw {
            next.extend(suffix.iter().map(|s| x.mul(s)));
        }
        suffix = next;
    }
    let chunks = exec.map_range(powers[0].len(), |k| {
        let head = &powers[0][k];
        suffix.iter().map(|s| head.mul(s)).collect::<Vec<_>>()
    });
    let out: Vec<ColoredPerm> = chunks.into_iter().flatten().collect();
    debug_assert_eq!(out.len() as u128, total);
    Ok(out)
}

fn table_from_products(
    basis: &Basis,
    products: Vec<ColoredPerm>,
    group: Option<&ElementSet>,
) -> std::result::Result<DecompositionTable, FailureWitness> {
    let mut ranks = HashMap::with_capacity(products.len());
    for (rank, g) in products.into_iter().enumerate() {
        let rank = rank as u64;
        if let Some(group) = group {
            if !group.contains(&g) {
                return Err(FailureWitness::OutsideGroup { exponents: unrank(&basis.moduli, rank), element: g });
            }
        }
        if let Some(&prev) = ranks.get(&g) {
            return Err(FailureWitness::Collision {
                first: unrank(&basis.moduli, prev),
                second: unrank(&basis.moduli, rank),
                element: g,
            });
        }
        ranks.insert(g, rank);
    }
    Ok(DecompositionTable { moduli: basis.moduli.clone(), ranks })
}

/// Checks that every element of `group` has exactly one presentation.
pub fn validate_basis(basis: &Basis, group: &ElementSet, exec: Execution) -> Result<DecompositionTable> {
    validate_basis_with_ceiling(basis, group, exec, DEFAULT_CEILING)
}

pub fn validate_basis_with_ceiling(
    basis: &Basis,
    group: &ElementSet,
    exec: Execution,
    ceiling: u64,
) -> Result<DecompositionTable> {
    if let Some((n, r)) = group.shape() {
        ColoredPerm::identity(basis.n, basis.r).check_same_group(&ColoredPerm::identity(n, r))?;
    }
    let products = all_products(basis, exec, ceiling)?;
    let table = table_from_products(basis, products, Some(group)).map_err(Error::NotABasis)?;
    if table.len() != group.len() {
        return Err(Error::NotABasis(FailureWitness::CountMismatch {
            products: table.len() as u64,
            group_order: group.len() as u64,
        }));
    }
    Ok(table)
}

/// Table of all products, without reference to a target group.
pub fn product_table(basis: &Basis, exec: Execution) -> Result<DecompositionTable> {
    let products = all_products(basis, exec, DEFAULT_CEILING)?;
    table_from_products(basis, products, None).map_err(Error::NotABasis)
}

/// `a_1^{k_1} ⋯ a_n^{k_n}`.
pub fn compose_from_exponents(basis: &Basis, ks: &ExponentVector) -> Result<ColoredPerm> {
    if ks.len() != basis.len() {
        return Err(Error::InvalidElement(format!("{} exponents for a basis of length {}", ks.len(), basis.len())));
    }
    let mut acc = ColoredPerm::identity(basis.n, basis.r);
    for (index, ((a, &m), &k)) in basis.elements.iter().zip(&basis.moduli).zip(&ks.0).enumerate() {
        if k >= m {
            return Err(Error::ExponentOutOfRange { index, k, modulus: m });
        }
        acc = acc.mul(&a.pow(k));
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    /// Look the element up among all basis products.
    #[default]
    Table,
    /// Strip the leading generator using the structure of the u/τ/t families.
    Peel,
}

pub fn decompose(g: &ColoredPerm, basis: &Basis, method: Method) -> Result<ExponentVector> {
    ColoredPerm::identity(basis.n, basis.r).check_same_group(g)?;
    match method {
        Method::Table => {
            product_table(basis, Execution::Sequential)?.get(g).ok_or_else(|| Error::NotInGroup(g.to_string()))
        }
        Method::Peel => peel(g, basis),
    }
}

/// Structural decomposition for the t-, τ- and u-bases.
///
/// For the u-basis, `u_{n-1}^{-k} g` lies in `H = ⟨u_0, …, u_{n-2}⟩` exactly when
/// it fixes the letter `n` and its last color equals `(αp-1)·Σ_{i<n} c_i`; erasing
/// that color maps `H` isomorphically onto `G(r, n-1)` and its τ-basis.
pub fn peel(g: &ColoredPerm, basis: &Basis) -> Result<ExponentVector> {
    ColoredPerm::identity(basis.n, basis.r).check_same_group(g)?;
    let not_in = || Error::NotInGroup(g.to_string());
    match basis.family {
        BasisFamily::Symmetric { n } | BasisFamily::Weyl(WeylType::A(n)) => {
            let mut ks = peel_wreath(g.clone(), 1, n).ok_or_else(not_in)?;
            ks.pop(); // τ_0 is trivial for r = 1
            Ok(ExponentVector(ks))
        }
        BasisFamily::Wreath { r, n } => peel_wreath(g.clone(), r, n).map(ExponentVector).ok_or_else(not_in),
        BasisFamily::Rpn { spec, alpha, .. } => peel_rpn(g, basis, &spec, alpha).map(ExponentVector).ok_or_else(not_in),
        _ => Err(Error::PeelUnsupported(basis.label.clone())),
    }
}

fn peel_wreath(mut g: ColoredPerm, r: u32, n: usize) -> Option<Vec<u64>> {
    let mut ks = Vec::with_capacity(n);
    for m in (1..=n).rev() {
        let step = tau(n, r, m - 1).inverse();
        let mut found = None;
        for k in 0..(r as u64 * m as u64) {
            let in_tail = if m == 1 { g.is_identity() } else { g.image(m - 1) == m - 1 && g.colors()[m - 1] == 0 };
            if in_tail {
                found = Some(k);
                break;
            }
            g = step.mul(&g);
        }
        ks.push(found?);
    }
    Some(ks)
}

fn peel_rpn(g: &ColoredPerm, basis: &Basis, spec: &GroupSpec, alpha: u32) -> Option<Vec<u64>> {
    let (r, n) = (spec.r, spec.n);
    let step = basis.elements[0].inverse();
    let m = basis.moduli[0];
    let mut h = g.clone();
    if n == 1 {
        for k in 0..m {
            if h.is_identity() {
                return Some(vec![k]);
            }
            h = step.mul(&h);
        }
        return None;
    }
    let coef = (alpha as u64 * spec.p as u64 + r as u64 - 1) % r as u64;
    let mut lead = None;
    for k in 0..m {
        let head: u64 = h.colors()[..n - 1].iter().map(|&c| c as u64).sum();
        if h.image(n - 1) == n - 1 && h.colors()[n - 1] as u64 == coef * head % r as u64 {
            lead = Some(k);
            break;
        }
        h = step.mul(&h);
    }
    let lead = lead?;
    // erase the last coordinate: H → G(r, n-1)
    let truncated =
        ColoredPerm::new(h.perm()[..n - 1].iter().map(|&v| v as usize).collect(), h.colors()[..n - 1].to_vec(), r)
            .ok()?;
    let mut ks = vec![lead];
    ks.extend(peel_wreath(truncated, r, n - 1)?);
    Some(ks)
}
