use proptest::prelude::*;

use bellkit::bell::{concurrence, concurrence_oracle, expand_in_bell_basis};
use bellkit::braid::{
    bell_relabel, bell_transform, conjugate_solution, tl_generators, tl_relation_check, yang_baxter_residual,
    BellTransformParams,
};
use bellkit::circuit::{Circuit, Gate};
use bellkit::linalg::{mul, permutation_matrix, residual, tensor, CMatrix};
use bellkit::pauli::{word_matrix, word_mul, BitString, GenPauliWord, PauliWord};
use bellkit::random::{gaussian_matrix, haar_unitary, random_state, rng};
use bellkit::teleport::{teleport_eq_suite, Variant};
use bellkit::Tolerance;

const TOL: f64 = 1e-10;

fn bits(n: usize) -> impl Strategy<Value = BitString> {
    prop::collection::vec(0u8..2, n).prop_map(|v| BitString::new(v).unwrap())
}

fn pauli_word(n: usize) -> impl Strategy<Value = PauliWord> {
    (bits(n), bits(n), 0u8..2).prop_map(|(z, x, s)| PauliWord::new(z, x, s).unwrap())
}

fn permutation(k: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..k).collect::<Vec<_>>()).prop_shuffle()
}

fn params() -> impl Strategy<Value = BellTransformParams> {
    prop::sample::select(BellTransformParams::ALL.to_vec())
}

fn gate(wires: usize) -> impl Strategy<Value = Gate> {
    (0..5u8, 0..wires, 1..wires).prop_map(move |(kind, a, off)| {
        let b = (a + off) % wires;
        match kind {
            0 => Gate::H(a),
            1 => Gate::X(a),
            2 => Gate::Z(a),
            3 => Gate::Cnot { control: a, target: b },
            _ => Gate::Swap(a, b),
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn word_product_matches_matrix_product((a, b) in (1usize..4).prop_flat_map(|n| (pauli_word(n), pauli_word(n)))) {
        let product = word_matrix(&word_mul(&a, &b).unwrap()).unwrap();
        let direct = mul(&word_matrix(&a).unwrap(), &word_matrix(&b).unwrap()).unwrap();
        prop_assert!(residual(&product, &direct).unwrap() < TOL);
    }

    #[test]
    fn gen_word_mul_and_dagger(d in 2usize..7, e in prop::array::uniform6(0i64..12)) {
        let u = GenPauliWord::new(d, e[0], e[1], e[2]).unwrap();
        let v = GenPauliWord::new(d, e[3], e[4], e[5]).unwrap();
        let uv = mul(&u.matrix(), &v.matrix()).unwrap();
        prop_assert!(residual(&u.mul(&v).unwrap().matrix(), &uv).unwrap() < TOL);
        let adj = bellkit::linalg::dagger(&u.matrix());
        prop_assert!(residual(&u.dagger().matrix(), &adj).unwrap() < TOL);
        prop_assert_eq!(u.dagger(), u.dagger_direct());
    }

    #[test]
    fn permutations_compose((s, p) in (1usize..5).prop_flat_map(|k| (permutation(k), permutation(k))), d in 2usize..4) {
        let composed: Vec<usize> = p.iter().map(|&q| s[q]).collect();
        let lhs = permutation_matrix(&composed, d).unwrap();
        let rhs = mul(&permutation_matrix(&s, d).unwrap(), &permutation_matrix(&p, d).unwrap()).unwrap();
        prop_assert_eq!(residual(&lhs, &rhs).unwrap(), 0.0);
    }

    #[test]
    fn tensor_mixed_product(seed in any::<u64>(), m in 1usize..4, n in 1usize..4) {
        let mut g = rng(seed);
        let (a, c) = (gaussian_matrix(m, m, &mut g), gaussian_matrix(m, 2, &mut g));
        let (b, e) = (gaussian_matrix(n, n, &mut g), gaussian_matrix(n, 3, &mut g));
        let lhs = mul(&tensor(&a, &b).unwrap(), &tensor(&c, &e).unwrap()).unwrap();
        let rhs = tensor(&mul(&a, &c).unwrap(), &mul(&b, &e).unwrap()).unwrap();
        prop_assert!(residual(&lhs, &rhs).unwrap() < 1e-9);
    }

    #[test]
    fn bell_expansion_reconstructs(seed in any::<u64>(), n in 1usize..4) {
        let psi = random_state(1 << (2 * n), &mut rng(seed));
        let exp = expand_in_bell_basis(&psi, n).unwrap();
        prop_assert!((exp.norm_sqr() - 1.0).abs() < TOL);
        prop_assert!(residual(&exp.reconstruct().unwrap(), &psi).unwrap() < TOL);
    }

    #[test]
    fn concurrence_agrees_with_oracle(seed in any::<u64>(), n in 1usize..4) {
        let psi = random_state(1 << (2 * n), &mut rng(seed));
        let c = concurrence(&psi, n).unwrap();
        prop_assert!((-TOL..=1.0 + TOL).contains(&c));
        prop_assert!((c - concurrence_oracle(&psi, n).unwrap()).abs() < TOL);
    }

    #[test]
    fn relabel_is_a_bijection(p in params()) {
        let mut seen = [false; 4];
        for i in 0..2 {
            for j in 0..2 {
                let (a, b) = bell_relabel(p, i, j);
                seen[(2 * a + b) as usize] = true;
            }
        }
        prop_assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn conjugated_transform_solves_ybe(p in params(), seed in any::<u64>()) {
        let v = haar_unitary(2, &mut rng(seed));
        let r = conjugate_solution(&bell_transform(p), &v).unwrap();
        prop_assert!(yang_baxter_residual(&r, 2).unwrap() < TOL);
    }

    #[test]
    fn teleport_equation_holds_for_any_seed(seed in any::<u64>(), d in 2usize..5) {
        let tol = Tolerance::new(TOL).unwrap();
        for v in [Variant::Qudit11, Variant::Qudit22] {
            prop_assert!(teleport_eq_suite(v, d, seed, tol).unwrap().passed());
        }
    }

    #[test]
    fn tl_relations_survive_unitary_extension(seed in any::<u64>(), d in 2usize..4, a in 0usize..2, b in 0usize..2) {
        let m = haar_unitary(d, &mut rng(seed));
        let rep = tl_generators(3, d, (a, b), Some(&m)).unwrap();
        prop_assert!(tl_relation_check(&rep, Tolerance::new(TOL).unwrap()).unwrap().passed());
    }

    #[test]
    fn qasm_round_trip((wires, gates) in (2usize..6).prop_flat_map(|w| (Just(w), prop::collection::vec(gate(w), 0..20)))) {
        let mut c = Circuit::new(wires).unwrap();
        for g in gates {
            c.push(g).unwrap();
        }
        let back = Circuit::from_qasm(&c.to_qasm()).unwrap();
        prop_assert_eq!(&back, &c);
        let psi = CMatrix::basis_ket(1 << wires, 0);
        prop_assert!(residual(&back.apply(&psi).unwrap(), &mul(&c.to_matrix().unwrap(), &psi).unwrap()).unwrap() < TOL);
    }
}
