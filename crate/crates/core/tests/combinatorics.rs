use std::collections::BTreeSet;

use flagmirror::combinat::{
    binomial, enumerate_m, enumerate_s, enumerate_tuples, perm_to_tuple, tuple_to_perm,
    FlagPermutation, FlagShape,
};

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for w in permutations(n - 1) {
        for pos in 0..=w.len() {
            let mut v = w.clone();
            v.insert(pos, n);
            out.push(v);
        }
    }
    out
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[test]
fn index_set_sizes() {
    for n in 1..=10 {
        for r in 1..n {
            assert_eq!(
                enumerate_s(n, r).unwrap().len() as u64,
                binomial(n, r),
                "S({n},{r})"
            );
            assert_eq!(enumerate_m(n, r).unwrap().len(), n, "M({n},{r})");
        }
    }
}

#[test]
fn permutations_and_tuples_are_in_bijection() {
    for n in 1..=6 {
        let perms = permutations(n);
        for shape in FlagShape::all_with_n(n) {
            let allowed: BTreeSet<usize> = shape.ranks().iter().copied().collect();
            let reps: Vec<FlagPermutation> = perms
                .iter()
                .map(|w| FlagPermutation::new(w.clone()).unwrap())
                .filter(|w| w.descents().iter().all(|d| allowed.contains(d)))
                .collect();
            let mut blocks: Vec<usize> = (1..=shape.rho() + 1)
                .map(|i| shape.r(i - 1) - shape.r(i))
                .collect();
            blocks.retain(|&b| b > 1);
            let expected = factorial(n) / blocks.iter().map(|&b| factorial(b)).product::<usize>();
            assert_eq!(reps.len(), expected, "{shape}");

            let tuples: BTreeSet<_> = enumerate_tuples(&shape).into_iter().collect();
            assert_eq!(tuples.len(), expected, "{shape}");
            let mut images = BTreeSet::new();
            for w in &reps {
                let t = perm_to_tuple(w, &shape).unwrap();
                assert!(tuples.contains(&t));
                assert_eq!(&tuple_to_perm(&t, &shape).unwrap(), w);
                images.insert(t);
            }
            assert_eq!(images, tuples, "{shape}");
        }
    }
}
