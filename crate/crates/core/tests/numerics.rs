use num_bigint::BigInt;
use num_traits::ToPrimitive;
use weil_core::decomposition::QLambda;
use weil_core::group::GroupSpec;
use weil_core::numerics::{run_verification, weyl_matrix, ComplexOperator, NumericalModel, VerifyConfig, DEFAULT_MATRIX_CAP};
use weil_core::poset::{Partition, DEFAULT_IDEAL_CAP};
use weil_core::Execution;

fn setup(p: u64, parts: &[u32]) -> (GroupSpec, QLambda) {
    let part = Partition::new(parts.to_vec()).unwrap();
    let spec = GroupSpec::new(p, part.clone()).unwrap();
    let ql = QLambda::new(part, DEFAULT_IDEAL_CAP, Execution::default()).unwrap();
    (spec, ql)
}

#[test]
fn dense_weyl_relation_on_z3() {
    let (spec, _) = setup(3, &[1]);
    let n = spec.order().unwrap() as usize;
    let ks: Vec<_> = (0..n * n).map(|i| spec.k_at(i)).collect();
    let dense: Vec<ComplexOperator> = ks.iter().map(|k| weyl_matrix(&spec, k, DEFAULT_MATRIX_CAP).unwrap()).collect();
    for (k, wk) in ks.iter().zip(&dense) {
        for (l, wl) in ks.iter().zip(&dense) {
            let sum = weyl_matrix(&spec, &spec.add_k(k, l), DEFAULT_MATRIX_CAP).unwrap();
            let c = spec.cocycle(k, l).to_complex();
            let expect = ComplexOperator(sum.matrix() * c);
            assert!(wk.mul(wl).max_abs_diff(&expect) < 1e-12, "k={k:?} l={l:?}");
        }
    }
}

#[test]
fn delta_products_on_z9() {
    let (spec, ql) = setup(3, &[2]);
    let model = NumericalModel::new(&spec, &ql, DEFAULT_MATRIX_CAP, Execution::default()).unwrap();
    let n = model.dim() as f64;
    let poset = ql.poset();
    for &a in ql.ideals() {
        for &b in ql.ideals() {
            let meet = a.intersection(b);
            let target = poset.perp(meet).intersection(a.union(b));
            let k_meet = (spec.characteristic_members(meet, u128::MAX).unwrap().len() as f64).powi(2);
            let dev = model.delta(a).mul(model.delta(b)).max_abs_diff(&model.delta(target).scale(k_meet));
            assert!(dev / n < 1e-10, "{a:?} {b:?}: {dev}");
        }
    }
}

#[test]
fn projectors_resolve_the_identity() {
    let (spec, ql) = setup(3, &[2, 1]);
    let model = NumericalModel::new(&spec, &ql, DEFAULT_MATRIX_CAP, Execution::default()).unwrap();
    let mut sum = ComplexOperator::zeros(model.dim());
    for qe in ql.elements() {
        let e = model.projector_matrix(qe).unwrap();
        assert!(e.idempotent_defect() < 1e-9 && e.hermitian_defect() < 1e-9);
        let dim = ql.dim_irreducible(qe).unwrap().evaluate_integer(&BigInt::from(3)).unwrap().to_f64().unwrap();
        assert!((e.trace().re - dim).abs() < 1e-6, "{qe:?}");
        sum.add_scaled(1.0, &e);
    }
    assert!(sum.max_abs_diff(&ComplexOperator::identity(model.dim())) < 1e-9);
}

#[test]
fn witnesses_on_z27_z3() {
    let (spec, ql) = setup(3, &[3, 1]);
    let model = NumericalModel::new(&spec, &ql, DEFAULT_MATRIX_CAP, Execution::default()).unwrap();
    for qe in ql.elements() {
        assert!(model.existence_witness_check(qe, 1e-8).unwrap(), "{qe:?}");
    }
}

#[test]
fn verification_is_execution_independent() {
    let (spec, ql) = setup(5, &[1]);
    let run = |exec| {
        let cfg = VerifyConfig { exec, ..VerifyConfig::default() };
        let report = run_verification(&spec, &ql, &cfg).unwrap();
        assert!(report.passed, "{:?}", report.first_failure());
        report.checks.iter().map(|c| (c.name.clone(), c.status)).collect::<Vec<_>>()
    };
    assert_eq!(run(Execution::Sequential), run(Execution::Parallel));
}
