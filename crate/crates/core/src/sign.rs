//! The Koszul sign engine.
//!
//! Every sign in the crate is computed here: permutations of graded factors
//! pick up `(-1)^{|u||v|}` for each transposed pair, and explicit sign
//! exponents are reduced through [`sign_of`].

/// `(-1)^exponent` as `±1`.
pub fn sign_of(exponent: i64) -> i64 {
    if exponent.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Sign of exchanging two adjacent factors of degrees `a` and `b`.
pub fn swap_sign(a: i64, b: i64) -> i64 {
    sign_of(a * b)
}

/// Sign of the permutation sending factors `v_1 ⊗ … ⊗ v_n` to
/// `v_{perm[0]} ⊗ … ⊗ v_{perm[n-1]}`, where `degrees[i]` is the degree of `v_i`.
///
/// The sign is the product of `(-1)^{|v_i||v_j|}` over the pairs whose
/// relative order is inverted.
pub fn koszul_sign(degrees: &[i64], perm: &[usize]) -> i64 {
    debug_assert_eq!(degrees.len(), perm.len());
    let mut exponent = 0i64;
    for i in 0..perm.len() {
        for j in (i + 1)..perm.len() {
            if perm[i] > perm[j] {
                exponent += degrees[perm[i]] * degrees[perm[j]];
            }
        }
    }
    sign_of(exponent)
}

/// Reorder `items` so that position `k` holds `items[perm[k]]`.
pub fn permute<T: Clone>(items: &[T], perm: &[usize]) -> Vec<T> {
    perm.iter().map(|&i| items[i].clone()).collect()
}

/// Sign of moving the first `k` factors past the remaining ones.
pub fn rotation_sign(degrees: &[i64], k: usize) -> i64 {
    let left: i64 = degrees[..k].iter().sum();
    let right: i64 = degrees[k..].iter().sum();
    swap_sign(left, right)
}

/// The cyclic permutation `v_1 ⊗ … ⊗ v_n ↦ v_n ⊗ v_1 ⊗ … ⊗ v_{n-1}`.
pub fn cycle_forward(n: usize) -> Vec<usize> {
    (0..n).map(|k| (k + n - 1) % n).collect()
}

/// The cyclic permutation `v_1 ⊗ … ⊗ v_n ↦ v_2 ⊗ … ⊗ v_n ⊗ v_1`.
pub fn cycle_backward(n: usize) -> Vec<usize> {
    (0..n).map(|k| (k + 1) % n).collect()
}
