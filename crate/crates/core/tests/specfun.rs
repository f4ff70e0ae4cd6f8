use std::f64::consts::PI;

use approx::assert_relative_eq;
use evbounds::specfun::*;

struct Row {
    mu: f64,
    r: f64,
    j: f64,
    y: f64,
    i: f64,
    k: f64,
}

fn oracle() -> Vec<Row> {
    let text = include_str!("data/bessel_oracle.csv");
    text.lines()
        .skip(1)
        .map(|line| {
            let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
            Row {
                mu: v[0],
                r: v[1],
                j: v[2],
                y: v[3],
                i: v[4],
                k: v[5],
            }
        })
        .collect()
}

fn o(mu: f64) -> Order {
    Order::new(mu).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn matches_extended_precision_table() {
    let mut worst = [(0.0, 0.0, 0.0); 4];
    for row in oracle() {
        let mu = o(row.mu);
        let jy = bessel_jy(mu, row.r).unwrap();
        let i = bessel_i(mu, row.r).unwrap().value;
        let k = bessel_k(mu, row.r).unwrap().value;
        // Oscillatory functions are compared against their local modulus.
        let modulus = row.j.hypot(row.y);
        let errs = [
            (jy.j - row.j).abs() / if row.r > row.mu { modulus } else { row.j.abs() },
            (jy.y - row.y).abs() / if row.r > row.mu { modulus } else { row.y.abs() },
            rel(i, row.i),
            rel(k, row.k),
        ];
        for (w, e) in worst.iter_mut().zip(errs) {
            if e > w.0 {
                *w = (e, row.mu, row.r);
            }
        }
    }
    for (name, w) in ["J", "Y", "I", "K"].iter().zip(worst) {
        assert!(w.0 < 1e-12, "{name}: error {:.3e} at mu={}, r={}", w.0, w.1, w.2);
    }
}

#[test]
fn abs_err_covers_table_deviation() {
    for row in oracle() {
        let mu = o(row.mu);
        let j = bessel_j(mu, row.r).unwrap();
        let y = bessel_y(mu, row.r).unwrap();
        assert!((j.value - row.j).abs() <= j.abs_err, "J mu={} r={}", row.mu, row.r);
        assert!((y.value - row.y).abs() <= y.abs_err, "Y mu={} r={}", row.mu, row.r);
    }
}

#[test]
fn wronskians() {
    for mu in [0.0, 0.3, 0.5, 1.0, 2.5, 7.25, 10.0, 50.0] {
        for k in 0..200 {
            let r = 10f64.powf(-3.0 + 5.0 * k as f64 / 199.0);
            let v = bessel_jy(o(mu), r).unwrap();
            let w = v.j * v.yp - v.jp * v.y;
            let err = v.j.abs() * v.yp_err + v.yp.abs() * v.j_err + v.jp.abs() * v.y_err + v.y.abs() * v.jp_err;
            let target = 2.0 / (PI * r);
            assert!((w - target).abs() <= 10.0 * err.max(f64::EPSILON * target), "JY mu={mu} r={r}");
            assert!(((w - target) / target).abs() < 1e-8);

            let s = bessel_ik_scaled(o(mu), r).unwrap();
            let w = s.i * s.kp - s.ip * s.k;
            let err = s.i.abs() * s.kp_err + s.kp.abs() * s.i_err + s.ip.abs() * s.k_err + s.k.abs() * s.ip_err;
            let target = -1.0 / r;
            assert!((w - target).abs() <= 10.0 * err.max(f64::EPSILON / r), "IK mu={mu} r={r}");
        }
    }
}

#[test]
fn half_integer_closed_forms() {
    let mu = o(0.5);
    for k in 0..=300 {
        let r = 10f64.powf(-3.0 + 5.0 * k as f64 / 300.0);
        let a = (2.0 / (PI * r)).sqrt();
        assert_relative_eq!(bessel_j(mu, r).unwrap().value, a * r.sin(), max_relative = 1e-10);
        assert_relative_eq!(bessel_y(mu, r).unwrap().value, -a * r.cos(), max_relative = 1e-10);
        assert_relative_eq!(bessel_i(mu, r).unwrap().value, a * r.sinh(), max_relative = 1e-10);
        assert_relative_eq!(bessel_k(mu, r).unwrap().value, (PI / (2.0 * r)).sqrt() * (-r).exp(), max_relative = 1e-10);
        let h = hankel1(mu, r).unwrap().value;
        let expect = num_complex::Complex64::new(0.0, -a) * num_complex::Complex64::new(0.0, r).exp();
        assert!((h - expect).norm() <= 1e-10 * expect.norm());
    }
    // Spot values from the specification of the closed forms.
    assert!(bessel_j(mu, PI).unwrap().value.abs() < 1e-15);
    assert!(bessel_y(mu, PI / 2.0).unwrap().value.abs() < 1e-15);
    assert_relative_eq!(
        bessel_k(mu, 1.0).unwrap().value,
        (PI / 2.0).sqrt() * (-1f64).exp(),
        max_relative = 1e-15
    );
}

#[test]
fn higher_half_integer_orders_use_closed_form_base() {
    // j_1 spherical: J_{3/2}(r) = sqrt(2/(πr)) (sin r / r − cos r).
    for r in [0.01, 0.7, 3.0, 17.0, 80.0] {
        let a = (2.0 / (PI * r)).sqrt();
        let j = a * (r.sin() / r - r.cos());
        let y = -a * (r.cos() / r + r.sin());
        let v = bessel_jy(o(1.5), r).unwrap();
        let m = j.hypot(y);
        assert!((v.j - j).abs() < 1e-13 * m.max(j.abs()));
        assert!((v.y - y).abs() < 1e-13 * m);
    }
}

#[test]
fn recurrence_consistency() {
    for mu in [1.0, 1.3, 2.5, 5.0, 12.7, 40.0] {
        for k in 0..100 {
            let r = 10f64.powf(-2.0 + 4.0 * k as f64 / 99.0);
            let lo = bessel_j(o(mu - 1.0), r).unwrap().value;
            let mid = bessel_j(o(mu), r).unwrap().value;
            let hi = bessel_j(o(mu + 1.0), r).unwrap().value;
            let scale = lo.abs() + hi.abs();
            assert!((lo + hi - 2.0 * mu / r * mid).abs() <= 1e-8 * scale, "mu={mu} r={r}");
        }
    }
}

#[test]
fn hankel_modulus_weighted_is_non_increasing() {
    // Holds for μ ≥ 1/2 (constant 2/π at μ = 1/2).
    for mu in [0.5, 1.0, 3.7, 10.0, 30.0] {
        let mut prev = f64::INFINITY;
        for k in 0..400 {
            let r = 10f64.powf(-2.0 + 4.0 * k as f64 / 399.0);
            let h = hankel1(o(mu), r).unwrap();
            let v = r * h.value.norm_sqr();
            let tol = 2.0 * r * h.value.norm() * h.abs_err;
            assert!(v <= prev + tol, "mu={mu} r={r}");
            prev = v;
        }
    }
}

#[test]
fn hankel_reference_value() {
    let h = hankel1(o(0.0), 1.0).unwrap().value;
    assert_relative_eq!(h.re, 0.765_197_686_557_966_6, max_relative = 1e-14);
    assert_relative_eq!(h.im, 0.088_256_964_215_676_96, max_relative = 1e-13);
}

#[test]
fn large_arguments_and_orders() {
    // Values far outside the tabulated range stay finite and satisfy the Wronskian.
    for (mu, r) in [(0.0, 1e4), (3.3, 5e3), (200.0, 150.0), (200.0, 250.0), (60.0, 1.0), (150.0, 2.5)] {
        let v = bessel_jy(o(mu), r).unwrap();
        let w = v.j * v.yp - v.jp * v.y;
        assert_relative_eq!(w, 2.0 / (PI * r), max_relative = 1e-9);
    }
}

#[test]
fn certifier_constants_are_stable_under_grid_refinement() {
    let coarse: Vec<Order> = [0.5, 1.0, 2.0, 5.0, 10.0].iter().map(|&m| o(m)).collect();
    let mut fine = coarse.clone();
    fine.extend([o(20.0), o(50.0)]);
    let a = certify_bounds(&coarse, 200, DEFAULT_ALPHA0).unwrap();
    let b = certify_bounds(&fine, 200, DEFAULT_ALPHA0).unwrap();
    // Below the sech α₀ point, |J_μ|·√μ·e^{μφ} tends to 1/√(2π tanh α) from
    // below as μ grows (Debye), so this constant keeps creeping up by O(1/μ).
    let debye = 1.0 / (2.0 * PI * DEFAULT_ALPHA0.tanh()).sqrt();
    for (x, y) in a.iter().zip(&b) {
        assert!(y.constant.is_finite() && y.constant > 0.0 || y.samples == 0);
        if x.samples == 0 {
            continue;
        }
        if x.region == Region::OscillBelow && x.kind == Kind::J {
            assert!(y.constant >= x.constant && y.constant < debye);
            continue;
        }
        assert!(
            (y.constant - x.constant).abs() <= 0.1 * x.constant,
            "{} {}: {} vs {}",
            x.region,
            x.kind,
            x.constant,
            y.constant
        );
    }
    let turning_h = b.iter().find(|r| r.region == Region::Turning && r.kind == Kind::H1).unwrap();
    assert!(turning_h.constant.is_finite());
}
