//! Colored permutations: the wreath product `G(r,n) = Z_r ≀ S_n` and its
//! index-`p` subgroups `G(r,p,n)`.
//!
//! An element is a pair `(c; π)` where `π` is a permutation in one-line
//! notation and `c` assigns a color in `Z_r` to every *value* of `π`. The
//! product is
//!
//! ```text
//! (c; π) · (c'; π') = ((c_i + c'_{π⁻¹(i)})_i ; π∘π')
//! ```
//!
//! with `(π∘π')(i) = π(π'(i))`. Read as a signed (colored) map on letters this
//! is ordinary composition of functions, so the color of a letter in the
//! one-line window is the color stored at the letter's value: the signed word
//! `[-2,1,3]` has colors `(0,1,0)`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use itertools::Itertools;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default ceiling on the order of groups enumerated exhaustively.
pub const DEFAULT_CEILING: u64 = 10_000_000;

/// Largest supported degree (letters are stored as `u8`).
pub const MAX_DEGREE: usize = 255;

/// An element of `G(r,n)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredPerm {
    // Field order gives the (perm, colors) lexicographic order used by enumeration.
    perm: Vec<u8>,
    colors: Vec<u32>,
    r: u32,
}

impl ColoredPerm {
    pub fn identity(n: usize, r: u32) -> Self {
        assert!(n <= MAX_DEGREE && r >= 1);
        ColoredPerm { perm: (0..n as u8).collect(), colors: vec![0; n], r }
    }

    /// Builds an element from 0-based one-line images and value-indexed colors.
    pub fn new(perm: Vec<usize>, colors: Vec<u32>, r: u32) -> Result<Self> {
        let n = perm.len();
        if r == 0 {
            return Err(Error::InvalidElement("color modulus must be positive".into()));
        }
        if n > MAX_DEGREE {
            return Err(Error::InvalidElement(format!("degree {n} exceeds {MAX_DEGREE}")));
        }
        if colors.len() != n {
            return Err(Error::InvalidElement(format!("{} colors for a window of length {n}", colors.len())));
        }
        let mut seen = vec![false; n];
        for &v in &perm {
            if v >= n || seen[v] {
                return Err(Error::InvalidElement(format!(
                    "window {:?} is not a permutation of 1..{n}",
                    perm.iter().map(|v| v + 1).collect::<Vec<_>>()
                )));
            }
            seen[v] = true;
        }
        if let Some(c) = colors.iter().find(|&&c| c >= r) {
            return Err(Error::InvalidElement(format!("color {c} out of range 0..{r}")));
        }
        Ok(ColoredPerm { perm: perm.into_iter().map(|v| v as u8).collect(), colors, r })
    }

    /// Uncolored element from a 1-based one-line window.
    pub fn from_one_line(window: &[usize], r: u32) -> Result<Self> {
        if window.contains(&0) {
            return Err(Error::InvalidElement("one-line entries are 1-based".into()));
        }
        Self::new(window.iter().map(|v| v - 1).collect(), vec![0; window.len()], r)
    }

    /// Signed permutation (`r = 2`) from a signed 1-based window such as `[-2, 1, 3]`.
    pub fn from_signed(window: &[i64]) -> Result<Self> {
        Self::from_signed_mod(window, 2)
    }

    fn from_signed_mod(window: &[i64], r: u32) -> Result<Self> {
        let n = window.len();
        let mut perm = Vec::with_capacity(n);
        let mut colors = vec![0; n];
        for &x in window {
            let v = x.unsigned_abs() as usize;
            if v == 0 || v > n {
                return Err(Error::InvalidElement(format!("entry {x} out of range for degree {n}")));
            }
            perm.push(v - 1);
            if x < 0 {
                if r < 2 {
                    return Err(Error::InvalidElement(format!("negative entry {x} needs r >= 2 (got r = {r})")));
                }
                colors[v - 1] = 1;
            }
        }
        Self::new(perm, colors, r)
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Value-indexed colors.
    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// 0-based one-line window.
    pub fn perm(&self) -> &[u8] {
        &self.perm
    }

    /// `π(i)` for a 0-based position.
    pub fn image(&self, i: usize) -> usize {
        self.perm[i] as usize
    }

    /// Color carried by the letter in window position `i`.
    pub fn color_at_position(&self, i: usize) -> u32 {
        self.colors[self.image(i)]
    }

    pub fn color_sum(&self) -> u64 {
        self.colors.iter().map(|&c| c as u64).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.colors.iter().all(|&c| c == 0) && self.perm.iter().enumerate().all(|(i, &v)| v as usize == i)
    }

    pub fn check_same_group(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() || self.r != other.r {
            return Err(Error::Dimension { expected_n: self.n(), expected_r: self.r, n: other.n(), r: other.r });
        }
        Ok(())
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_same_group(other)?;
        Ok(self.mul(other))
    }

    /// Product without the dimension check; callers guarantee matching `(n, r)`.
    #[allow(clippy::needless_range_loop)]
    pub(crate) fn mul(&self, other: &Self) -> Self {
        let n = self.n();
        let r = self.r;
        let mut perm = vec![0u8; n];
        let mut colors = vec![0u32; n];
        for k in 0..n {
            let v = self.perm[k] as usize;
            perm[k] = self.perm[other.perm[k] as usize];
            // value v = π(k), so π⁻¹(v) = k
            colors[v] = (self.colors[v] + other.colors[k]) % r;
        }
        ColoredPerm { perm, colors, r }
    }

    #[allow(clippy::needless_range_loop)]
    pub fn inverse(&self) -> Self {
        let n = self.n();
        let r = self.r;
        let mut perm = vec![0u8; n];
        let mut colors = vec![0u32; n];
        for k in 0..n {
            let v = self.perm[k] as usize;
            perm[v] = k as u8;
            colors[k] = (r - self.colors[v]) % r;
        }
        ColoredPerm { perm, colors, r }
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut acc = ColoredPerm::identity(self.n(), self.r);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Smallest `k >= 1` with `g^k = 1`, by repeated multiplication.
    pub fn order(&self) -> u64 {
        let mut k = 1;
        let mut x = self.clone();
        while !x.is_identity() {
            x = x.mul(self);
            k += 1;
        }
        k
    }

    /// Membership in `G(r,p,n)`: the color sum vanishes mod `p`.
    pub fn in_grpn(&self, spec: &GroupSpec) -> Result<bool> {
        if self.n() != spec.n || self.r != spec.r {
            return Err(Error::Dimension { expected_n: spec.n, expected_r: spec.r, n: self.n(), r: self.r });
        }
        Ok(self.color_sum().is_multiple_of(spec.p as u64))
    }

    /// Parses `c=[c1,...,cn];w=[w1,...,wn]` or, for `r <= 2`, a signed window `[-2,1,3]`.
    pub fn parse(text: &str, r: u32) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(rest) = compact.strip_prefix("c=") {
            let (colors, window) = rest
                .split_once(";w=")
                .ok_or_else(|| Error::Parse(format!("expected `c=[..];w=[..]`, got `{text}`")))?;
            let colors: Vec<u32> = parse_list(colors)?;
            let window: Vec<usize> = parse_list(window)?;
            if window.contains(&0) {
                return Err(Error::InvalidElement("one-line entries are 1-based".into()));
            }
            Self::new(window.iter().map(|v| v - 1).collect(), colors, r)
        } else if compact.starts_with('[') {
            if r > 2 {
                return Err(Error::Parse(format!(
                    "signed shorthand is only defined for r <= 2 (r = {r}); use c=[..];w=[..]"
                )));
            }
            let window: Vec<i64> = parse_list(&compact)?;
            Self::from_signed_mod(&window, r)
        } else {
            Err(Error::Parse(format!("unrecognized element `{text}`")))
        }
    }

    /// Signed window (1-based), valid for `r <= 2`.
    pub fn signed_window(&self) -> Vec<i64> {
        (0..self.n())
            .map(|i| {
                let v = self.image(i) as i64 + 1;
                if self.color_at_position(i) == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect()
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    let inner = s
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected a bracketed list, got `{s}`")))?;
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(|t| t.parse::<T>().map_err(|_| Error::Parse(format!("bad list entry `{t}`")))).collect()
}

impl fmt::Display for ColoredPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r <= 2 {
            write!(f, "[{}]", self.signed_window().iter().join(","))
        } else {
            write!(
                f,
                "c=[{}];w=[{}]",
                self.colors.iter().join(","),
                self.perm.iter().map(|&v| v as usize + 1).join(",")
            )
        }
    }
}

impl fmt::Debug for ColoredPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The parameters `(r, p, n)` of `G(r,p,n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub r: u32,
    pub p: u32,
    pub n: usize,
}

impl GroupSpec {
    pub fn new(r: u32, p: u32, n: usize) -> Result<Self> {
        if r == 0 || p == 0 || n == 0 {
            return Err(Error::InvalidSpec(format!("r, p, n must be positive (got {r}, {p}, {n})")));
        }
        if !r.is_multiple_of(p) {
            return Err(Error::InvalidSpec(format!("p = {p} does not divide r = {r}")));
        }
        if n > MAX_DEGREE {
            return Err(Error::InvalidSpec(format!("n = {n} exceeds {MAX_DEGREE}")));
        }
        Ok(GroupSpec { r, p, n })
    }

    /// The full wreath product `G(r,n) = G(r,1,n)`.
    pub fn wreath(r: u32, n: usize) -> Result<Self> {
        Self::new(r, 1, n)
    }

    pub fn r_over_p(&self) -> u32 {
        self.r / self.p
    }

    /// `n! · r^n / p`, or `None` on `u128` overflow.
    pub fn order(&self) -> Option<u128> {
        let mut acc: u128 = 1;
        for i in 1..=self.n as u128 {
            acc = acc.checked_mul(i)?;
        }
        for _ in 0..self.n {
            acc = acc.checked_mul(self.r as u128)?;
        }
        Some(acc / self.p as u128)
    }

    /// `gcd(n, p, r/p)`; the u-basis construction needs this to be 1.
    pub fn gcd_flag(&self) -> u64 {
        (self.n as u64).gcd(&(self.p as u64)).gcd(&(self.r_over_p() as u64))
    }

    pub fn check_ceiling(&self, ceiling: u64) -> Result<u64> {
        match self.order() {
            Some(o) if o <= ceiling as u128 => Ok(o as u64),
            Some(o) => Err(Error::TooLarge { size: o.to_string(), ceiling }),
            None => Err(Error::TooLarge { size: "overflow".into(), ceiling }),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{},{})", self.r, self.p, self.n)
    }
}

/// A finite set of elements with a stable order and an index for lookups.
#[derive(Clone, Debug)]
pub struct ElementSet {
    elements: Vec<ColoredPerm>,
    index: HashMap<ColoredPerm, usize>,
}

impl ElementSet {
    pub fn from_vec(elements: Vec<ColoredPerm>) -> Self {
        let mut index = HashMap::with_capacity(elements.len());
        let mut unique = Vec::with_capacity(elements.len());
        for g in elements {
            if !index.contains_key(&g) {
                index.insert(g.clone(), unique.len());
                unique.push(g);
            }
        }
        ElementSet { elements: unique, index }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &ColoredPerm) -> bool {
        self.index.contains_key(g)
    }

    pub fn index_of(&self, g: &ColoredPerm) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn get(&self, i: usize) -> &ColoredPerm {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[ColoredPerm] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ColoredPerm> {
        self.elements.iter()
    }

    /// `(n, r)` of the members, if any.
    pub fn shape(&self) -> Option<(usize, u32)> {
        self.elements.first().map(|g| (g.n(), g.r()))
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = &'a ColoredPerm;
    type IntoIter = std::slice::Iter<'a, ColoredPerm>;
    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// All of `G(r,p,n)`, lexicographic by `(perm, colors)`.
pub fn enumerate_group(spec: &GroupSpec, ceiling: u64) -> Result<ElementSet> {
    let order = spec.check_ceiling(ceiling)?;
    let n = spec.n;
    let mut out = Vec::with_capacity(order as usize);
    for perm in (0..n).permutations(n) {
        for colors in std::iter::repeat_n(0..spec.r, n).multi_cartesian_product() {
            if colors.iter().map(|&c| c as u64).sum::<u64>() % spec.p as u64 != 0 {
                continue;
            }
            out.push(ColoredPerm { perm: perm.iter().map(|&v| v as u8).collect(), colors, r: spec.r });
        }
    }
    debug_assert_eq!(out.len() as u64, order);
    Ok(ElementSet::from_vec(out))
}

/// The subgroup generated by `generators`, in breadth-first order from the identity.
pub fn closure(generators: &[ColoredPerm], ceiling: u64) -> Result<ElementSet> {
    let first =
        generators.first().ok_or_else(|| Error::InvalidElement("closure needs at least one generator".into()))?;
    for g in generators {
        first.check_same_group(g)?;
    }
    let id = ColoredPerm::identity(first.n(), first.r());
    let mut index = HashMap::new();
    let mut elements = vec![id.clone()];
    index.insert(id.clone(), 0usize);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for s in generators {
            let y = x.mul(s);
            if !index.contains_key(&y) {
                if elements.len() as u64 >= ceiling {
                    return Err(Error::TooLarge { size: format!("more than {}", elements.len()), ceiling });
                }
                index.insert(y.clone(), elements.len());
                elements.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(ElementSet { elements, index })
}

/// The cycle `t_i = s_i s_{i-1} ⋯ s_1 = (i+1, i, …, 1)` in `S_n`, as a 0-based window.
pub(crate) fn t_cycle(n: usize, i: usize) -> Vec<usize> {
    // one-line [i+1, 1, 2, …, i, i+2, …, n]
    let mut w: Vec<usize> = (0..n).collect();
    if i > 0 {
        w[0] = i;
        for (k, slot) in w.iter_mut().enumerate().take(i + 1).skip(1) {
            *slot = k - 1;
        }
    }
    w
}
