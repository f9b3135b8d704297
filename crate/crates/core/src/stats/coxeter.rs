//! Standard Coxeter generating sets and the closed-form type B length.

use crate::group::ColoredPerm;

fn adjacent(n: usize, r: u32, i: usize) -> ColoredPerm {
    let mut w: Vec<usize> = (0..n).collect();
    w.swap(i - 1, i);
    ColoredPerm::new(w, vec![0; n], r).unwrap()
}

/// `s_1, …, s_{n-1}` in `S_n`.
pub fn coxeter_generators_a(n: usize) -> Vec<ColoredPerm> {
    (1..n).map(|i| adjacent(n, 1, i)).collect()
}

/// `s_0 = [-1,2,…,n]` followed by `s_1, …, s_{n-1}`.
pub fn coxeter_generators_b(n: usize) -> Vec<ColoredPerm> {
    let mut colors = vec![0; n];
    colors[0] = 1;
    let s0 = ColoredPerm::new((0..n).collect(), colors, 2).unwrap();
    std::iter::once(s0).chain((1..n).map(|i| adjacent(n, 2, i))).collect()
}

/// `s'_0 = [-2,-1,3,…,n]` followed by `s_1, …, s_{n-1}`; needs `n >= 2`.
pub fn coxeter_generators_d(n: usize) -> Vec<ColoredPerm> {
    assert!(n >= 2);
    let mut w: Vec<usize> = (0..n).collect();
    w.swap(0, 1);
    let mut colors = vec![0; n];
    colors[0] = 1;
    colors[1] = 1;
    let s0 = ColoredPerm::new(w, colors, 2).unwrap();
    std::iter::once(s0).chain((1..n).map(|i| adjacent(n, 2, i))).collect()
}

/// Coxeter length in `B_n`: `inv(w) - Σ_{w(j) < 0} w(j)` over the signed window.
pub fn b_length(w: &ColoredPerm) -> u64 {
    assert_eq!(w.r(), 2, "type B length needs a signed permutation");
    let win = w.signed_window();
    let mut inv = 0u64;
    for i in 0..win.len() {
        for j in i + 1..win.len() {
            if win[i] > win[j] {
                inv += 1;
            }
        }
    }
    let neg: i64 = win.iter().filter(|&&x| x < 0).sum();
    inv + (-neg) as u64
}

/// Membership in `B_n^+` (even Coxeter length).
pub fn in_bplus(w: &ColoredPerm) -> bool {
    b_length(w).is_multiple_of(2)
}

/// Membership in `D_n` (even number of sign changes).
pub fn in_dn(w: &ColoredPerm) -> bool {
    w.r() == 2 && w.color_sum().is_multiple_of(2)
}
