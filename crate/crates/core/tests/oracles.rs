use ogmr::oracles::{
    active_set_size, box_projection, gen_boxqp, gen_lasso, gen_logsumexp, gen_quadratic, soft_threshold, SmoothOracle,
};
use ogmr::Vector;

#[test]
fn generators_are_pure_functions_of_their_arguments() {
    let a = gen_quadratic(30, 1e-2, 5).unwrap();
    let b = gen_quadratic(30, 1e-2, 5).unwrap();
    assert_eq!(a.q(), b.q());
    assert_eq!(a.p(), b.p());
    assert_ne!(gen_quadratic(30, 1e-2, 6).unwrap().p(), a.p());

    let l1 = gen_lasso(20, 40, 4, 1.0, 0.1, 3).unwrap();
    let l2 = gen_lasso(20, 40, 4, 1.0, 0.1, 3).unwrap();
    assert_eq!(l1.least_squares.b(), l2.least_squares.b());
    assert_eq!(l1.x_true, l2.x_true);

    let e1 = gen_logsumexp(15, 5, 2.0, 8).unwrap();
    let e2 = gen_logsumexp(15, 5, 2.0, 8).unwrap();
    let x = Vector::from_element(5, 0.3);
    assert_eq!(e1.value(&x), e2.value(&x));
}

#[test]
fn box_problem_objective_is_infinite_outside() {
    let prob = gen_boxqp(10, 100.0, 1).unwrap();
    let inside = Vector::from_element(10, 0.5);
    let outside = Vector::from_element(10, 1.5);
    assert!(prob.objective(&inside).is_finite());
    assert_eq!(prob.objective(&outside), f64::INFINITY);
    let projected = prob.nonsmooth.prox(&outside, 0.3);
    assert_eq!(projected, Vector::from_element(10, 1.0));
    let lower = Vector::from_element(10, -1.0);
    let upper = Vector::from_element(10, 1.0);
    assert_eq!(active_set_size(&projected, &lower, &upper, 0.0), 10);
    assert_eq!(box_projection(&outside, &lower, &upper).unwrap(), projected);
}

#[test]
fn lasso_prox_is_soft_thresholding() {
    let inst = gen_lasso(10, 20, 3, 0.8, 0.1, 2).unwrap();
    let z = Vector::from_fn(20, |i, _| i as f64 * 0.1 - 1.0);
    assert_eq!(inst.problem.nonsmooth.prox(&z, 0.5), soft_threshold(&z, 0.4));
    assert!((inst.problem.nonsmooth.value(&z) - 0.8 * z.abs().sum()).abs() < 1e-12);
}

#[test]
fn quadratic_reports_its_constants() {
    let p = gen_quadratic(25, 1e-3, 9).unwrap();
    assert_eq!(p.lipschitz(), 1.0);
    assert_eq!(p.strong_convexity(), Some(1e-3));
    let x_star = p.x_star().unwrap();
    assert!(p.gradient(x_star).norm() < 1e-9);
    assert!((p.value(x_star) - p.optimal_value().unwrap()).abs() < 1e-9);
}
