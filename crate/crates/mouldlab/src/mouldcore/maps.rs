//! The linear substitutions underlying the mould operators, as explicit
//! argument lists. Variables are 0-based: `e(i)` is the variable `x_{i+1}`.

use crate::exactalg::{unit, LinearMap};

fn e(r: usize, i: usize) -> Vec<i64> {
    unit(r, i)
}

fn sum_range(r: usize, from: usize, to: usize) -> Vec<i64> {
    let mut v = vec![0; r];
    for c in &mut v[from..to] {
        *c = 1;
    }
    v
}

fn neg(v: Vec<i64>) -> Vec<i64> {
    v.into_iter().map(|c| -c).collect()
}

fn sub(a: Vec<i64>, b: Vec<i64>) -> Vec<i64> {
    a.into_iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `A(u₁,…,u_r) ↦ A(−u₁−⋯−u_r, u₁, …, u_{r−1})`.
pub fn push_u(r: usize) -> LinearMap {
    let mut args = vec![neg(sum_range(r, 0, r))];
    args.extend((0..r.saturating_sub(1)).map(|k| e(r, k)));
    LinearMap::new(r, args)
}

/// `B(v₁,…,v_r) ↦ B(−v_r, v₁−v_r, …, v_{r−1}−v_r)`.
pub fn push_v(r: usize) -> LinearMap {
    let mut args = vec![neg(e(r, r - 1))];
    args.extend((0..r - 1).map(|k| sub(e(r, k), e(r, r - 1))));
    LinearMap::new(r, args)
}

/// `B(v₁,…,v_r) ↦ B(v₂,…,v_r,v₁)`.
pub fn circ(r: usize) -> LinearMap {
    LinearMap::new(r, (0..r).map(|k| e(r, (k + 1) % r)).collect())
}

/// From `u` to `v`: `A ↦ A(v_r, v_{r−1}−v_r, …, v₁−v₂)`.
pub fn swap_u_to_v(r: usize) -> LinearMap {
    let args = (0..r)
        .map(|k| {
            let hi = r - 1 - k;
            if k == 0 {
                e(r, hi)
            } else {
                sub(e(r, hi), e(r, hi + 1))
            }
        })
        .collect();
    LinearMap::new(r, args)
}

/// From `v` to `u`: `B ↦ B(u₁+⋯+u_r, u₁+⋯+u_{r−1}, …, u₁)`.
pub fn swap_v_to_u(r: usize) -> LinearMap {
    LinearMap::new(r, (0..r).map(|k| sum_range(r, 0, r - k)).collect())
}

/// The `r + 1` argument lists of the Fay operator in depth `r`, with
/// `ū_i = u₁+⋯+u_i`: the identity, `(u₂,…,u_r,−ū_r)`, and for `1 ≤ i ≤ r−1`
/// `(u₂,…,u_i, −ū_i, ū_{i+1}, u_{i+2},…,u_r)`.
pub fn fay_terms(r: usize) -> Vec<LinearMap> {
    let mut out = vec![LinearMap::identity(r)];
    let mut last: Vec<Vec<i64>> = (1..r).map(|k| e(r, k)).collect();
    last.push(neg(sum_range(r, 0, r)));
    out.push(LinearMap::new(r, last));
    for i in 1..r {
        let mut args: Vec<Vec<i64>> = (1..i).map(|k| e(r, k)).collect();
        args.push(neg(sum_range(r, 0, i)));
        args.push(sum_range(r, 0, i + 1));
        args.extend((i + 1..r).map(|k| e(r, k)));
        out.push(LinearMap::new(r, args));
    }
    out
}

/// Argument permutations of all interleavings of `(x₁…x_i)` with
/// `(x_{i+1}…x_r)`, each given as the list of variable indices in word order.
pub fn shuffles(i: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(a: &[usize], b: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if a.is_empty() && b.is_empty() {
            out.push(cur.clone());
            return;
        }
        if let Some((&x, rest)) = a.split_first() {
            cur.push(x);
            rec(rest, b, cur, out);
            cur.pop();
        }
        if let Some((&y, rest)) = b.split_first() {
            cur.push(y);
            rec(a, rest, cur, out);
            cur.pop();
        }
    }
    let a: Vec<usize> = (0..i).collect();
    let b: Vec<usize> = (i..r).collect();
    let mut out = Vec::new();
    rec(&a, &b, &mut Vec::new(), &mut out);
    out
}

/// The substitution evaluating a function at the permuted word `perm`.
pub fn permutation(perm: &[usize]) -> LinearMap {
    let r = perm.len();
    LinearMap::new(r, perm.iter().map(|&k| e(r, k)).collect())
}

/// Embedding of `len` variables as the slice `offset..offset+len` of `r`.
pub fn slice(len: usize, offset: usize, r: usize) -> LinearMap {
    LinearMap::new(r, (0..len).map(|k| e(r, offset + k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fay_depth_two_arguments() {
        let t = fay_terms(2);
        assert_eq!(t.len(), 3);
        assert_eq!(t[1].images, vec![vec![0, 1], vec![-1, -1]]);
        assert_eq!(t[2].images, vec![vec![-1, 0], vec![1, 1]]);
    }

    #[test]
    fn fay_depth_three_arguments() {
        let t = fay_terms(3);
        assert_eq!(t[1].images, vec![vec![0, 1, 0], vec![0, 0, 1], vec![-1, -1, -1]]);
        assert_eq!(t[2].images, vec![vec![-1, 0, 0], vec![1, 1, 0], vec![0, 0, 1]]);
        assert_eq!(t[3].images, vec![vec![0, 1, 0], vec![-1, -1, 0], vec![1, 1, 1]]);
    }

    #[test]
    fn fay_depth_one_is_parity_sum() {
        let t = fay_terms(1);
        assert_eq!(t.len(), 2);
        assert_eq!(t[1].images, vec![vec![-1]]);
    }

    #[test]
    fn swap_depth_three() {
        assert_eq!(swap_u_to_v(3).images, vec![vec![0, 0, 1], vec![0, 1, -1], vec![1, -1, 0]]);
        assert_eq!(swap_u_to_v(3).then(&swap_v_to_u(3)), LinearMap::identity(3));
    }

    #[test]
    fn orders_of_push_and_circ() {
        for r in 1..7 {
            assert_eq!(push_u(r).power(r + 1), LinearMap::identity(r));
            assert_eq!(push_v(r).power(r + 1), LinearMap::identity(r));
            assert_eq!(circ(r).power(r), LinearMap::identity(r));
        }
    }

    #[test]
    fn shuffle_counts() {
        assert_eq!(shuffles(1, 2), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(shuffles(2, 5).len(), 10);
    }
}
