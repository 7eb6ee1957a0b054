//! Scripted worked examples. Each prints its algebraic steps and checks the
//! result against the expected closed form.

use std::fmt;

use nilrad::expr::{eval_real, parse, partial, RealEnv, SmoothExpr};
use nilrad::oracle::quadrature;
use nilrad::{
    derive, derive_with, format_significant, infinitesimal_integral, lift_eval, mixed_partial, Error, ExponentQ,
    FermatEnv, FermatReal,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;

pub const NAMES: [&str; 6] = ["dipole", "curvature", "schwarz", "ode-roots", "newtonian-limit", "diff-under-integral"];

#[derive(Clone, Debug, PartialEq)]
enum Entry {
    Step(String),
    Check(String, bool),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    name: String,
    seed: u64,
    entries: Vec<Entry>,
}

impl Report {
    fn new(name: &str, seed: u64) -> Self {
        Report { name: name.to_string(), seed, entries: Vec::new() }
    }

    fn step(&mut self, text: impl Into<String>) {
        self.entries.push(Entry::Step(text.into()));
    }

    fn check(&mut self, text: impl Into<String>, ok: bool) {
        self.entries.push(Entry::Check(text.into(), ok));
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// True when every check passed (and there was at least one).
    pub fn passed(&self) -> bool {
        let mut any = false;
        for e in &self.entries {
            if let Entry::Check(_, ok) = e {
                if !ok {
                    return false;
                }
                any = true;
            }
        }
        any
    }

    pub fn checks(&self) -> impl Iterator<Item = (&str, bool)> {
        self.entries.iter().filter_map(|e| match e {
            Entry::Check(text, ok) => Some((text.as_str(), *ok)),
            Entry::Step(_) => None,
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "example {} (seed {})", self.name, self.seed)?;
        let (mut passed, mut total) = (0, 0);
        for e in &self.entries {
            match e {
                Entry::Step(text) => writeln!(f, "  {text}")?,
                Entry::Check(text, ok) => {
                    total += 1;
                    if *ok {
                        passed += 1;
                    }
                    writeln!(f, "  [{}] {text}", if *ok { "PASS" } else { "FAIL" })?;
                }
            }
        }
        write!(f, "{}: {} ({passed}/{total} checks)", self.name, if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Runs the named example with randomness drawn from `seed`.
pub fn run(name: &str, seed: u64) -> Result<Report, CliError> {
    let body: fn(&mut Report, &mut ChaCha8Rng) -> Result<(), Error> = match name {
        "dipole" => dipole,
        "curvature" => curvature,
        "schwarz" => schwarz,
        "ode-roots" => ode_roots,
        "newtonian-limit" => newtonian_limit,
        "diff-under-integral" => diff_under_integral,
        other => return Err(CliError::UnknownExample(other.to_string())),
    };
    let mut report = Report::new(name, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if let Err(e) = body(&mut report, &mut rng) {
        report.check(format!("unexpected error: {e}"), false);
    }
    Ok(report)
}

fn num(x: f64) -> String {
    format_significant(x, 6)
}

fn lift(source: &str, bindings: &[(&str, &FermatReal)]) -> Result<FermatReal, Error> {
    let env: FermatEnv = bindings.iter().map(|(k, v)| (k.to_string(), (*v).clone())).collect();
    lift_eval(&parse(source)?, &env)
}

fn dyadic(rng: &mut ChaCha8Rng, lo: i32, hi: i32) -> f64 {
    let k = loop {
        let k = rng.gen_range(lo..=hi);
        if k != 0 {
            break k;
        }
    };
    f64::from(k) / 4.0
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn dipole(report: &mut Report, rng: &mut ChaCha8Rng) -> Result<(), Error> {
    // Powers of two and quarter-integers keep every coefficient exact.
    let r = 2f64.powi(rng.gen_range(-1..=3));
    let c = dyadic(rng, -4, 4);
    let q = dyadic(rng, 1, 8);
    let delta = dyadic(rng, 1, 8);
    let d = FermatReal::monomial(delta, ExponentQ::ONE);
    let (r_, c_) = (FermatReal::real(r), FermatReal::real(c));
    report.step(format!("observer distance r = {}, cos angle c = {}, charge q = {}", num(r), num(c), num(q)));
    report.step(format!("separation d = {d} in D, so d^2 = {}", d.pow(2)));

    let inv_r2 = lift("(r^2 + d^2/4 + r*d*c)^(-1/2)", &[("r", &r_), ("d", &d), ("c", &c_)])?;
    let inv_r1 = lift("(r^2 + d^2/4 - r*d*c)^(-1/2)", &[("r", &r_), ("d", &d), ("c", &c_)])?;
    report.step(format!("1/r2 = (r^2 + d^2/4 + r·d·c)^(-1/2) = {inv_r2}"));
    report.step(format!("1/r1 = (r^2 + d^2/4 - r·d·c)^(-1/2) = {inv_r1}"));
    let first_order = d.scale(c / (2.0 * r));
    let expect_r2 = (FermatReal::one() - first_order.clone()).scale(1.0 / r);
    let expect_r1 = (FermatReal::one() + first_order).scale(1.0 / r);
    report.check("1/r2 = r^-1·(1 - c·d/(2r))", inv_r2 == expect_r2);
    report.check("1/r1 = r^-1·(1 + c·d/(2r))", inv_r1 == expect_r1);

    let phi = (&inv_r1 - &inv_r2).scale(q);
    let expected = d.scale(q * c / (r * r));
    report.step(format!("potential q·(1/r1 - 1/r2) = {phi}"));
    report.step(format!("dipole term q·c·d/r^2 = {expected}"));
    report.check("potential equals the dipole term q·(r·d)/r^3", phi == expected);
    Ok(())
}

fn curvature(report: &mut Report, rng: &mut ChaCha8Rng) -> Result<(), Error> {
    // gamma(s) = (s, a s^2/2 + b s^3) at s = 0: unit tangent (1,0), normal (0,1), curvature a.
    let a = 2.0;
    let b = dyadic(rng, -8, 8);
    let h = FermatReal::witness(2);
    let (a_, b_) = (FermatReal::real(a), FermatReal::real(b));
    report.step(format!("curve gamma(s) = (s, a·s^2/2 + b·s^3) with a = {}, b = {}, at s = 0", num(a), num(b)));
    report.step(format!("h = {h} in D_2, h^2 = {}, h^3 = {}", h.pow(2), h.pow(3)));

    let x = lift("s", &[("s", &h)])?;
    let y = lift("a*s^2/2 + b*s^3", &[("s", &h), ("a", &a_), ("b", &b_)])?;
    report.step(format!("gamma(h) = ({x}, {y})"));
    let taylor_y = h.pow(2).scale(a / 2.0);
    report.check("gamma(h) = gamma_0 + h·gamma'_0 + h^2/2·gamma''_0", x == h && y == taylor_y);

    let c = a;
    let c_ = FermatReal::real(c);
    let sin_ch = lift("sin(c*h)", &[("c", &c_), ("h", &h)])?;
    let cos_ch = lift("cos(c*h)", &[("c", &c_), ("h", &h)])?;
    report.step(format!("curvature c = {}: sin(c·h) = {sin_ch}, cos(c·h) = {cos_ch}", num(c)));
    report.check("sin(c·h) = c·h", sin_ch == h.scale(c));
    report.check("cos(c·h) = 1 - c^2·h^2/2", cos_ch == FermatReal::one() - h.pow(2).scale(c * c / 2.0));

    // (gamma_0 + n/c) + (sin(c h)·t - cos(c h)·n)/c with t = (1,0), n = (0,1).
    let circle_x = sin_ch.scale(1.0 / c);
    let circle_y = FermatReal::real(1.0 / c) - cos_ch.scale(1.0 / c);
    report.step(format!("osculating circle point = ({circle_x}, {circle_y})"));
    report.check("gamma(h) lies on the circle of curvature", circle_x == x && circle_y == y);
    Ok(())
}

fn schwarz(report: &mut Report, rng: &mut ChaCha8Rng) -> Result<(), Error> {
    let source = "sin(x)*cos(y) + x^2*y";
    let e = parse(source)?;
    let vars = ["x", "y"];
    let mut pick = || [f64::from(rng.gen_range(-8..=8)) / 8.0, f64::from(rng.gen_range(-8..=8)) / 8.0];
    let (u, v, x0) = (pick(), pick(), pick());
    let fmt = |p: [f64; 2]| format!("({}, {})", num(p[0]), num(p[1]));
    report.step(format!("f(x, y) = {source}, x0 = {}, u = {}, v = {}", fmt(x0), fmt(u), fmt(v)));
    report.step(format!(
        "k = {} in D_2, h = j = {}, jkh = {} is nonzero",
        FermatReal::witness(2),
        FermatReal::witness(4),
        FermatReal::witness(1)
    ));
    let uv = mixed_partial(&e, &vars, &u, &v, &x0)?;
    let vu = mixed_partial(&e, &vars, &v, &u, &x0)?;
    report.step(format!("j·[f(x+hu+kv) - f(x+hu) - f(x+kv) + f(x)] / jkh = {}", num(uv)));
    report.step(format!("with u and v exchanged = {}", num(vu)));
    report.check("d_u d_v f(x0) = d_v d_u f(x0)", uv == vu);

    let env: RealEnv = [("x".to_string(), x0[0]), ("y".to_string(), x0[1])].into_iter().collect();
    let hessian = |i: u32, j: u32| eval_real(&partial(&e, &vars, &[i, j]), &env);
    let (fxx, fxy, fyy) = (hessian(2, 0)?, hessian(1, 1)?, hessian(0, 2)?);
    let analytic = u[0] * v[0] * fxx + (u[0] * v[1] + u[1] * v[0]) * fxy + u[1] * v[1] * fyy;
    report.step(format!("u·Hf(x0)·v from the symbolic Hessian = {}", num(analytic)));
    report.check("agrees with the Hessian within 1e-10", close(uv, analytic, 1e-10));
    Ok(())
}

fn ode_roots(report: &mut Report, rng: &mut ChaCha8Rng) -> Result<(), Error> {
    let r1 = dyadic(rng, -6, 6);
    let t0 = dyadic(rng, -6, 6);
    let h = FermatReal::witness(1);
    let (r1_, t0_) = (FermatReal::real(r1), FermatReal::real(t0));
    let r = FermatReal::real(r1) + h.clone();
    report.step(format!("L(y) = y'' - 2·r1·y' + r1^2·y with double root r1 = {}", num(r1)));
    report.step(format!("r = r1 + h with h = {h} in D"));

    let char_poly = lift("(r - r1)^2", &[("r", &r), ("r1", &r1_)])?;
    report.step(format!("(r - r1)^2 = {char_poly}"));
    report.check("r = r1 + h is still a root", char_poly.is_zero());

    let y = lift("exp(r*t)", &[("r", &r), ("t", &t0_)])?;
    let base = (r1 * t0).exp();
    let expected = FermatReal::real(base) + h.scale(t0 * base);
    report.step(format!("e^((r1 + h)·t0) at t0 = {} is {y}", num(t0)));
    report.check("e^((r1 + h)t) = e^(r1 t) + h·t·e^(r1 t)", y == expected);

    let env: RealEnv = [("r1".to_string(), r1)].into_iter().collect();
    for (label, source) in [("e^(r1 t)", "exp(r1*t)"), ("t·e^(r1 t)", "t*exp(r1*t)")] {
        let ts = dyadic(rng, -6, 6);
        let jet = derive_with(&parse(source)?, "t", ts, 2, &env)?;
        let d = jet.derivatives();
        let l = d[2] - 2.0 * r1 * d[1] + r1 * r1 * d[0];
        let scale = d[2].abs() + (2.0 * r1 * d[1]).abs() + (r1 * r1 * d[0]).abs();
        report.step(format!("L[{label}] at t = {} is {}", num(ts), num(l)));
        report.check(format!("L[{label}] = 0"), l.abs() <= 1e-12 * scale.max(1.0));
    }
    Ok(())
}

fn newtonian_limit(report: &mut Report, rng: &mut ChaCha8Rng) -> Result<(), Error> {
    let v = FermatReal::witness(2);
    report.step(format!("speed v = {v} in D_2, v^2 = {}", v.pow(2)));
    for c in [1.0, 2.0, 4.0] {
        let c_ = FermatReal::real(c);
        let gamma = lift("1/sqrt(1 - v^2/c^2)", &[("v", &v), ("c", &c_)])?;
        report.step(format!("c = {}: 1/sqrt(1 - v^2/c^2) = {gamma}", num(c)));
        let expected = FermatReal::one() + v.pow(2).scale(1.0 / (2.0 * c * c));
        report.check(format!("Lorentz factor = 1 + v^2/(2c^2) at c = {}", num(c)), gamma == expected);
    }
    let h44 = FermatReal::monomial(dyadic(rng, -4, 4), ExponentQ::ONE);
    let root = lift("sqrt(1 - h44)", &[("h44", &h44)])?;
    report.step(format!("metric perturbation h44 = {h44} in D: sqrt(1 - h44) = {root}"));
    report.check("sqrt(1 - h44) = 1 - h44/2", root == FermatReal::one() - h44.scale(0.5));
    match lift("sqrt(h44)", &[("h44", &h44)]) {
        Err(Error::Domain(msg)) => {
            report.step(format!("sqrt(h44) is rejected: {msg}"));
            report.check("sqrt needs a strictly positive standard part", true);
        }
        Ok(value) => report.check(format!("sqrt(h44) should be rejected, got {value}"), false),
        Err(other) => return Err(other),
    }
    Ok(())
}

fn diff_under_integral(report: &mut Report, rng: &mut ChaCha8Rng) -> Result<(), Error> {
    // g(x) = int_{alpha(x)}^{beta(x)} f(x, t) dt with alpha = x, beta = x^2, f = sin(x t).
    let x0 = 1.0 + f64::from(rng.gen_range(0..=8)) / 16.0;
    let f = parse("sin(x*t)")?;
    let alpha = parse("x")?;
    let beta = parse("x^2")?;
    let h = FermatReal::witness(1);
    report.step(format!("g(x) = integral of sin(x·t) dt from x to x^2, at x = {}", num(x0)));

    let a = derive(&alpha, "x", x0, 1)?;
    let b = derive(&beta, "x", x0, 1)?;
    report.step(format!(
        "alpha(x+h) = {} + h·{}, beta(x+h) = {} + h·{}",
        num(a.value()),
        num(a.coefficients()[1]),
        num(b.value()),
        num(b.coefficients()[1])
    ));
    let at_x0: RealEnv = [("x".to_string(), x0)].into_iter().collect();
    let f_at_x0 = f.substitute("x", &SmoothExpr::Const(x0));
    let lower = infinitesimal_integral(&f_at_x0, "t", a.value(), &h.scale(a.coefficients()[1]))?;
    let upper = infinitesimal_integral(&f_at_x0, "t", b.value(), &h.scale(b.coefficients()[1]))?;
    report.step(format!("integral over [alpha, alpha + h·alpha'] = {lower}"));
    report.step(format!("integral over [beta, beta + h·beta'] = {upper}"));
    let dfdx = partial(&f, &["x"], &[1]).substitute("x", &SmoothExpr::Const(x0));
    let interior = quadrature(&dfdx, "t", a.value(), b.value())?;
    report.step(format!("h·integral of df/dx from alpha to beta = h·{}", num(interior)));
    let mut env = at_x0;
    env.insert("t".into(), a.value());
    let cross = infinitesimal_integral(&dfdx, "t", a.value(), &h.scale(a.coefficients()[1]))?;
    let vanishing = &h * &cross;
    report.step(format!(
        "h·(integral of df/dx over [alpha, alpha + h·alpha']) = h·({cross}) = {vanishing}, df/dx(x, alpha) = {}",
        num(eval_real(&partial(&f, &["x"], &[1]), &env)?)
    ));
    report.check("second-order boundary pieces vanish since h^2 = 0", vanishing.is_zero());

    let first_order = &(&upper - &lower) + &h.scale(interior);
    let slope = first_order.coefficient(ExponentQ::ONE);
    report.step(format!("g(x+h) - g(x) = {first_order}"));

    let g = |x: f64| -> Result<f64, Error> {
        let fx = f.substitute("x", &SmoothExpr::Const(x));
        quadrature(&fx, "t", x, x * x)
    };
    let step = 1e-4;
    let fd = (g(x0 + step)? - g(x0 - step)?) / (2.0 * step);
    report.step(format!("central difference of g with step {} = {}", num(step), num(fd)));
    report.check("g'(x) agrees with the central difference within 1e-5", close(slope, fd, 1e-5));
    Ok(())
}
