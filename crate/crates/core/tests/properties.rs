use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cobarlab_core::cobar::{Cobar, Elem2};
use cobarlab_core::dgc::{random_primitive, random_tensor_coalgebra};
use cobarlab_core::graded::koszul_parity;
use cobarlab_core::{cobar, parse_coalgebra, DgCoalgebra, Field, Lin, Q};

fn permutation(n: usize, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    v
}

fn two_gen() -> Cobar<DgCoalgebra<Q>> {
    let c = parse_coalgebra::<Q>("gen x 3; gen y 4; gen z 6; primitive").unwrap();
    cobar(c, 9).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn koszul_sign_is_a_cocycle(degrees in prop::collection::vec(0i32..5, 0..7), s1: u64, s2: u64) {
        let n = degrees.len();
        let q = permutation(n, s1);
        let p = permutation(n, s2);
        let moved: Vec<i32> = q.iter().map(|&i| degrees[i]).collect();
        let composite: Vec<usize> = p.iter().map(|&k| q[k]).collect();
        prop_assert_eq!(
            koszul_parity(&degrees, &composite),
            koszul_parity(&degrees, &q) ^ koszul_parity(&moved, &p)
        );
    }

    #[test]
    fn adjacent_swap_sign(a in 0i32..6, b in 0i32..6) {
        prop_assert_eq!(koszul_parity(&[a, b], &[1, 0]), (a * b) % 2 == 1);
    }

    #[test]
    fn tensor_product_interchange(i in 0usize..400, j in 0usize..400, k in 0usize..400, l in 0usize..400) {
        let o = two_gen();
        let words: Vec<_> = o.words_through(4).cloned().collect();
        let pick = |n: usize| words[n % words.len()].clone();
        let s: Elem2<DgCoalgebra<Q>> = Lin::basis((pick(i), pick(j)));
        let t: Elem2<DgCoalgebra<Q>> = Lin::basis((pick(k), pick(l)));
        let deg_s = o.word_degree(&pick(i)) + o.word_degree(&pick(j));
        // the differential of the tensor square is a derivation for the Koszul product
        let lhs = o.d_tensor(&o.mul_tensor(&s, &t));
        let mut rhs = o.mul_tensor(&o.d_tensor(&s), &t);
        rhs.add_scaled(&o.mul_tensor(&s, &o.d_tensor(&t)), &Q::sign(deg_s % 2 == 1));
        prop_assert_eq!(lhs, rhs);
        // and the product is associative
        let u: Elem2<DgCoalgebra<Q>> = Lin::basis((pick(j), pick(k)));
        prop_assert_eq!(o.mul_tensor(&o.mul_tensor(&s, &t), &u), o.mul_tensor(&s, &o.mul_tensor(&t, &u)));
    }

    #[test]
    fn coproduct_is_multiplicative(i in 0usize..400, j in 0usize..400) {
        let o = two_gen();
        let words: Vec<_> = o.words_through(4).cloned().collect();
        let x = Lin::basis(words[i % words.len()].clone());
        let y = Lin::basis(words[j % words.len()].clone());
        let lhs = o.nabla0(&o.mul(&x, &y)).unwrap();
        let rhs = o.mul_tensor(&o.nabla0(&x).unwrap(), &o.nabla0(&y).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn random_coalgebras_round_trip_and_square_to_zero(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_tensor_coalgebra::<Q, _>(&mut rng, 8);
        prop_assert_eq!(parse_coalgebra::<Q>(&c.to_text()).unwrap(), c.clone());
        let o = cobar(c, 7).unwrap();
        prop_assert!(o.check_d_squared(7).is_none());
        let p = random_primitive::<Q, _>(&mut rng, 6);
        prop_assert_eq!(parse_coalgebra::<Q>(&p.to_text()).unwrap(), p);
    }
}
