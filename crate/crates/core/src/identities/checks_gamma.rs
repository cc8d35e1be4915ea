//! Checkers for the double-sum lemmas, the ᵣRₛ reduction and the incomplete
//! gamma family.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::gammamat::{gamma_mat, pochhammer, pochhammer_kn, rgamma_mat};
use crate::hyper::{eval_pfq, eval_rrs, reindex, ParamSet};
use crate::incgamma::{
    gamma_star, gamma_star_alternating, inc_pochhammer, lower_inc_gamma, upper_inc_gamma, IncKind,
};
use crate::matcore::{mat_exp, matrix_power, CMatrix};
use crate::oracle::finite_diff;
use crate::C64;

use super::draw::{Draw, SpectralBox};
use super::support::*;

type M = CMatrix;

fn lower(q: &M, x: f64) -> Result<M> {
    lower_inc_gamma(q, x)
}

fn upper(q: &M, x: f64) -> Result<M> {
    upper_inc_gamma(q, x)
}

fn id(n: usize) -> M {
    M::identity(n)
}

/// Integer-valued matrices on a finite support, reproducible from one seed.
fn integer_table(seed: u64, n: usize, k_max: usize, n_max: usize) -> Vec<Vec<M>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..=k_max)
        .map(|_| {
            (0..=n_max)
                .map(|_| {
                    M::from_fn(n, |_, _| {
                        C64::new(rng.gen_range(-9..=9) as f64, rng.gen_range(-9..=9) as f64)
                    })
                })
                .collect()
        })
        .collect()
}

fn lookup(t: &[Vec<M>], k: usize, n: usize, dim: usize) -> M {
    t.get(k)
        .and_then(|row| row.get(n))
        .cloned()
        .unwrap_or_else(|| M::zeros(dim))
}

pub fn eq_1_4(d: &mut Draw) -> Result<Vec<f64>> {
    let n = d.dim();
    let seed = d.int("table_seed", 0, u32::MAX as usize) as u64;
    let k_max = d.int("k_max", 0, 8);
    let n_max = d.int("n_max", 0, 20);
    let t = integer_table(seed, n, k_max, n_max);
    let f = |k: usize, m: usize| lookup(&t, k, m, n);
    let full = reindex::rectangular(n, k_max, n_max, f);
    let two = reindex::diagonal(n, 2, n_max + 2 * k_max, f);
    let one = reindex::diagonal(n, 1, n_max + k_max, f);
    Ok(vec![worst(&[
        d.resid(Ok(full.clone()), Ok(two)),
        d.resid(Ok(full), Ok(one)),
    ])])
}

pub fn eq_1_5(d: &mut Draw) -> Result<Vec<f64>> {
    let n = d.dim();
    let seed = d.int("table_seed", 0, u32::MAX as usize) as u64;
    let n_max = d.int("n_max", 0, 20);
    let t = integer_table(seed, n, n_max, n_max);
    let f = |k: usize, m: usize| if m <= n_max { lookup(&t, k, m, n) } else { M::zeros(n) };
    let tri2 = reindex::triangular(n, 2, n_max, f);
    let sh2 = reindex::shifted(n, 2, n_max, n_max, f);
    let tri1 = reindex::triangular(n, 1, n_max, f);
    let sh1 = reindex::shifted(n, 1, n_max, n_max, f);
    Ok(vec![worst(&[d.resid(Ok(tri2), Ok(sh2)), d.resid(Ok(tri1), Ok(sh1))])])
}

pub fn eq_1_17(d: &mut Draw) -> Result<Vec<f64>> {
    let a2 = d.matrix("A2", A_BOX);
    let b = d.matrix("B1", B_BOX);
    let z = d.disk("z", c(0.0, 0.0), 2.0);
    let n = d.dim();
    let r = params(vec![id(n), a2.clone()], vec![b.clone()], id(n), id(n))?;
    let f = ParamSet::hypergeometric(vec![a2], vec![b]).map_err(infeasible)?;
    let lhs = eval_rrs(&r, z).map(|s| s.value);
    let rhs = eval_pfq(&f, z).map(|s| s.value);
    Ok(vec![d.resid(lhs, rhs)])
}

pub fn eq_2_1(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.1, 12.0);
    let rhs = weighted(&q, |u| Ok(id(q.dim()).scale_re((-u).exp())), x);
    Ok(vec![d.resid(lower(&q, x), rhs)])
}

fn tail_integrand(q: &M, u: f64) -> Result<M> {
    let e = (-u).exp();
    if e == 0.0 {
        return Ok(M::zeros(q.dim()));
    }
    Ok(pow(u, &q.shift_re(-1.0))?.scale_re(e))
}

pub fn eq_2_2(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.1, 12.0);
    let rhs = semi_inf(|u| tail_integrand(&q, u), x);
    Ok(vec![d.resid(upper(&q, x), rhs)])
}

pub fn eq_2_3(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 1.2, 12.0);
    let lhs = (|| Ok(&lower(&q, x)? + &upper(&q, x)?))();
    Ok(vec![d.resid(lhs, gamma_mat(&q))])
}

pub fn eq_2_4(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.1, 12.0);
    let rhs = (|| Ok(&(&q * &lower(&q, x)?) - &pow(x, &q)?.scale_re((-x).exp())))();
    Ok(vec![d.resid(lower(&q.shift_re(1.0), x), rhs)])
}

pub fn eq_2_5(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.1, 12.0);
    let rhs = (|| Ok(&(&q * &upper(&q, x)?) + &pow(x, &q)?.scale_re((-x).exp())))();
    Ok(vec![d.resid(upper(&q.shift_re(1.0), x), rhs)])
}

fn three_term(d: &mut Draw, f: fn(&M, f64) -> Result<M>) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.1, 12.0);
    let lhs = f(&q.shift_re(2.0), x);
    let rhs = (|| {
        let a = &q.shift_re(x + 1.0) * &f(&q.shift_re(1.0), x)?;
        Ok(&a - &(&q * &f(&q, x)?).scale_re(x))
    })();
    Ok(vec![d.resid(lhs, rhs)])
}

pub fn eq_2_6(d: &mut Draw) -> Result<Vec<f64>> {
    three_term(d, lower)
}

pub fn eq_2_7(d: &mut Draw) -> Result<Vec<f64>> {
    three_term(d, upper)
}

pub fn eq_2_8(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.1, 10.0);
    let n = d.int("n", 0, 4);
    let lhs = inc_pochhammer(&q, x, n, IncKind::Lower);
    let qn = q.shift_re(n as f64);
    let rhs = (|| Ok(&weighted(&qn, |u| Ok(id(q.dim()).scale_re((-u).exp())), x)? * &rgamma_mat(&q)?))();
    Ok(vec![d.resid(lhs, rhs)])
}

pub fn eq_2_9(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.1, 10.0);
    let n = d.int("n", 0, 4);
    let lhs = inc_pochhammer(&q, x, n, IncKind::Upper);
    let qn = q.shift_re(n as f64);
    let rhs = (|| Ok(&semi_inf(|u| tail_integrand(&qn, u), x)? * &rgamma_mat(&q)?))();
    Ok(vec![d.resid(lhs, rhs)])
}

pub fn eq_2_10(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 1.2, 12.0);
    let n = d.int("n", 0, 6);
    let lhs = (|| {
        Ok(&inc_pochhammer(&q, x, n, IncKind::Lower)? + &inc_pochhammer(&q, x, n, IncKind::Upper)?)
    })();
    Ok(vec![d.resid(lhs, Ok(pochhammer(&q, n)))])
}

pub fn eq_2_11(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let k = d.int("k", 1, 4);
    let n = d.int("n", 0, 5);
    Ok(vec![d.resid(pochhammer_kn(&q, k, n), Ok(pochhammer(&q, k * n)))])
}

pub fn eq_2_12(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.1, 8.0);
    let n = q.dim();
    let g = lower(&q, x);
    let qi = q.inverse()?;
    let line1 = (|| {
        let r = &(&qi * &pow(x, &q)?).scale_re((-x).exp()) * &kummer(&id(n), &q.shift_re(1.0), c(x, 0.0))?;
        Ok(r)
    })();
    let r1 = d.resid(g.clone(), line1);
    let printed = (|| Ok(&qi * &kummer(&q, &q.shift_re(1.0), c(x, 0.0))?))();
    let corrected = (|| Ok(&(&qi * &pow(x, &q)?) * &kummer(&q, &q.shift_re(1.0), c(-x, 0.0))?))();
    let r2 = d.resid(g.clone(), printed);
    let r3 = d.resid(g, corrected);
    Ok(vec![r1.max(r2), r1.max(r3)])
}

pub fn eq_2_13(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    d.avoid_integers(&q, 0.05)?;
    let x = d.real("x", 0.3, 8.0);
    let n = q.dim();
    let g = upper(&q, x);
    let ex = (-x).exp();
    let line1 = (|| Ok(&pow(x, &q)?.scale_re(ex) * &tricomi(&id(n), &q.shift_re(1.0), x)?))();
    let omq = &id(n) - &q;
    let line2 = (|| Ok(tricomi(&omq, &omq, x)?.scale_re(ex)))();
    let laplace = (|| {
        let qm = q.shift_re(-1.0);
        let u = semi_inf(
            |t| {
                let e = (-x * t).exp();
                if e == 0.0 {
                    return Ok(M::zeros(n));
                }
                Ok(pow(1.0 + t, &qm)?.scale_re(e))
            },
            0.0,
        )?;
        Ok(&pow(x, &q)?.scale_re(ex) * &u)
    })();
    let r1 = d.resid(g.clone(), line1);
    let r2 = d.resid(g.clone(), line2);
    let r3 = d.resid(g, laplace);
    Ok(vec![r1.max(r2), r3.max(r2)])
}

fn fd(f: impl Fn(f64) -> Result<M>, x: f64, order: u8) -> Result<M> {
    finite_diff(f, x, order)
}

pub fn eq_2_14(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.5, 8.0);
    let lhs = fd(|t| lower(&q, t), x, 1);
    let rhs = pow(x, &q.shift_re(-1.0)).map(|m| m.scale_re((-x).exp()));
    Ok(vec![d.resid(lhs, rhs)])
}

pub fn eq_2_15(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.5, 8.0);
    let lhs = fd(|t| upper(&q, t), x, 1);
    let rhs = pow(x, &q.shift_re(-1.0)).map(|m| m.scale_re(-(-x).exp()));
    Ok(vec![d.resid(lhs, rhs)])
}

pub fn eq_2_16(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let t0 = d.real("t", 0.5, 2.0);
    let qm = q.shift_re(-1.0);
    let f = |x: f64, t: f64| -> Result<M> { Ok(pow(x, &qm)?.scale_re((-t * x).exp())) };
    let u = |t: f64| quad(|x| f(x, t), t, t * t + 1.0);
    let lhs = fd(u, t0, 1);
    let rhs = (|| {
        let inner = quad(|x| Ok(f(x, t0)?.scale_re(-x)), t0, t0 * t0 + 1.0)?;
        let top = f(t0 * t0 + 1.0, t0)?.scale_re(2.0 * t0);
        let bottom = f(t0, t0)?;
        Ok(&(&inner + &top) - &bottom)
    })();
    Ok(vec![d.resid(lhs, rhs)])
}

fn ode_first(d: &mut Draw, f: fn(&M, f64) -> Result<M>) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.5, 8.0);
    let n = q.dim();
    let y2 = fd(|t| f(&q, t), x, 2);
    let rhs = (|| {
        let y1 = fd(|t| f(&q, t), x, 1)?;
        let coef = &id(n) + &(&id(n) - &q).scale_re(1.0 / x);
        Ok(-&(&coef * &y1))
    })();
    Ok(vec![d.resid(y2, rhs)])
}

pub fn eq_2_17(d: &mut Draw) -> Result<Vec<f64>> {
    ode_first(d, lower)
}

pub fn eq_2_18(d: &mut Draw) -> Result<Vec<f64>> {
    ode_first(d, upper)
}

fn sign(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn power_scaled(d: &mut Draw, f: fn(&M, f64) -> Result<M>) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.5, 8.0);
    let mq = -&q;
    let mut out = Vec::new();
    for n in 1..=2usize {
        let lhs = fd(|t| Ok(&pow(t, &mq)? * &f(&q, t)?), x, n as u8);
        let rhs = (|| {
            Ok((&pow(x, &mq.shift_re(-(n as f64)))? * &f(&q.shift_re(n as f64), x)?).scale_re(sign(n)))
        })();
        out.push(d.resid(lhs, rhs));
    }
    Ok(vec![worst(&out)])
}

pub fn eq_2_19(d: &mut Draw) -> Result<Vec<f64>> {
    power_scaled(d, upper)
}

pub fn eq_2_20(d: &mut Draw) -> Result<Vec<f64>> {
    power_scaled(d, lower)
}

fn exp_scaled(d: &mut Draw, f: fn(&M, f64) -> Result<M>) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::new(2.5, 5.0, -1.0, 1.0));
    let x = d.real("x", 0.5, 8.0);
    let omq = &id(q.dim()) - &q;
    let mut out = Vec::new();
    for n in 1..=2usize {
        let lhs = fd(|t| Ok(f(&q, t)?.scale_re(t.exp())), x, n as u8);
        let rhs = (|| {
            Ok((&pochhammer(&omq, n) * &f(&q.shift_re(-(n as f64)), x)?).scale_re(sign(n) * x.exp()))
        })();
        out.push(d.resid(lhs, rhs));
    }
    Ok(vec![worst(&out)])
}

pub fn eq_2_21(d: &mut Draw) -> Result<Vec<f64>> {
    exp_scaled(d, upper)
}

pub fn eq_2_22(d: &mut Draw) -> Result<Vec<f64>> {
    exp_scaled(d, lower)
}

pub fn eq_2_23(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.1, 8.0);
    let w = q.scale_re(2.0).shift_re(-1.0);
    let rhs = (|| {
        let v = semi_inf(
            |u| {
                let e = (-u * u).exp();
                if e == 0.0 {
                    return Ok(M::zeros(q.dim()));
                }
                Ok(pow(u, &w)?.scale_re(e))
            },
            x.sqrt(),
        )?;
        Ok(v.scale_re(2.0))
    })();
    Ok(vec![d.resid(upper(&q, x), rhs)])
}

pub fn eq_2_24(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.1, 8.0);
    let n = q.dim();
    let rhs = (|| {
        let v = weighted(&q, |s| Ok(id(n).scale_re(((1.0 - s) * x).exp())), 1.0)?;
        Ok(&pow(x, &q)?.scale_re((-x).exp()) * &v)
    })();
    Ok(vec![d.resid(lower(&q, x), rhs)])
}

fn antiderivative(d: &mut Draw, f: fn(&M, f64) -> Result<M>) -> Result<Vec<f64>> {
    let fam = d.family(&[("A", SpectralBox::new(0.5, 2.5, -0.5, 0.5)), ("Q", SpectralBox::DEFAULT)])?;
    let (a, q) = (&fam[0], &fam[1]);
    let x1 = d.real("x1", 0.3, 4.0);
    let x2 = x1 + d.real("width", 0.2, 4.0);
    let ai = a.inverse()?;
    let qa = q + a;
    let big_f = |x: f64| -> Result<M> { Ok(&ai * &(&(&pow(x, a)? * &f(q, x)?) - &f(&qa, x)?)) };
    let am = a.shift_re(-1.0);
    let integrand = |x: f64| -> Result<M> { Ok(&pow(x, &am)? * &f(q, x)?) };
    let r1 = d.resid(fd(big_f, x1, 1), integrand(x1));
    let r2 = d.resid(
        (|| Ok(&big_f(x2)? - &big_f(x1)?))(),
        quad(integrand, x1, x2),
    );
    Ok(vec![r1.max(r2)])
}

pub fn eq_2_25(d: &mut Draw) -> Result<Vec<f64>> {
    antiderivative(d, upper)
}

pub fn eq_2_26(d: &mut Draw) -> Result<Vec<f64>> {
    antiderivative(d, lower)
}

pub fn eq_2_27(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::new(1.5, 4.0, -1.0, 1.0));
    let t = d.real("t", 0.5, 3.0);
    let n = q.dim();
    let lhs = quad(
        |x| {
            let y = 1.0 / x;
            if y > 700.0 {
                return Ok(M::zeros(n));
            }
            upper(&q, y)
        },
        0.0,
        t,
    );
    let rhs = (|| Ok(&upper(&q, 1.0 / t)?.scale_re(t) - &upper(&q.shift_re(-1.0), 1.0 / t)?))();
    Ok(vec![d.resid(lhs, rhs)])
}

/// `∫_0^∞ e^{−Px} f(Q,x) dx`.
fn laplace_of(p: &M, q: &M, f: fn(&M, f64) -> Result<M>) -> Result<M> {
    let m = small_m(p)?;
    let mp = -p;
    semi_inf(
        |x| {
            if x * m > 700.0 {
                return Ok(M::zeros(p.dim()));
            }
            Ok(&mat_exp(&mp.scale_re(x))? * &f(q, x)?)
        },
        0.0,
    )
}

fn laplace_family(d: &mut Draw) -> Result<(M, M)> {
    let fam = d.family(&[("P", SpectralBox::new(0.5, 2.0, -0.5, 0.5)), ("Q", SpectralBox::DEFAULT)])?;
    Ok((fam[0].clone(), fam[1].clone()))
}

pub fn eq_2_28(d: &mut Draw) -> Result<Vec<f64>> {
    let (p, q) = laplace_family(d)?;
    let xs = d.real("x_in_printed_gamma", 0.5, 5.0);
    let lhs = laplace_of(&p, &q, lower);
    let pi = p.inverse()?;
    let damp = matrix_power(&p.shift_re(1.0), &(-&q));
    let printed = (|| Ok(&(&pi * &lower(&q, xs)?) * damp.as_ref().map_err(Clone::clone)?))();
    let corrected = (|| Ok(&(&pi * &gamma_mat(&q)?) * damp.as_ref().map_err(Clone::clone)?))();
    let r1 = d.resid(lhs.clone(), printed);
    let r2 = d.resid(lhs, corrected);
    Ok(vec![r1, r2])
}

pub fn eq_2_29(d: &mut Draw) -> Result<Vec<f64>> {
    let (p, q) = laplace_family(d)?;
    let n = p.dim();
    let lhs = laplace_of(&p, &q, upper);
    let rhs = (|| {
        let damp = matrix_power(&p.shift_re(1.0), &(-&q))?;
        Ok(&(&p.inverse()? * &gamma_mat(&q)?) * &(&id(n) - &damp))
    })();
    Ok(vec![d.resid(lhs, rhs)])
}

pub fn eq_2_30(d: &mut Draw) -> Result<Vec<f64>> {
    let fam = d.family(&[
        ("P", SpectralBox::new(-0.8, -0.2, -0.3, 0.3)),
        ("Q", SpectralBox::new(1.2, 3.0, -0.5, 0.5)),
    ])?;
    let (p, q) = (&fam[0], &fam[1]);
    let pq = p + q;
    let pm = p.shift_re(-1.0);
    let mq = -q;
    let pi = p.inverse()?;
    let lhs = (|| {
        let qi = q.inverse()?;
        let head = weighted(
            &pq,
            |x| {
                if x == 0.0 {
                    return Ok(qi.clone());
                }
                Ok(&pow(x, &mq)? * &lower(q, x)?)
            },
            1.0,
        )?;
        let tail = semi_inf(|x| Ok(&pow(x, &pm)? * &upper(q, x)?), 1.0)?;
        let whole = &(-&(&pi * &gamma_mat(q)?)) - &tail;
        Ok(&head + &whole)
    })();
    let rhs = gamma_mat(&pq).map(|g| -&(&pi * &g));
    Ok(vec![d.resid(lhs, rhs)])
}

pub fn eq_2_31(d: &mut Draw) -> Result<Vec<f64>> {
    let (p, q) = laplace_family(d)?;
    let pm = p.shift_re(-1.0);
    let lhs = (|| {
        let head = weighted(&p, |x| if x == 0.0 { gamma_mat(&q) } else { upper(&q, x) }, 1.0)?;
        let tail = semi_inf(|x| Ok(&pow(x, &pm)? * &upper(&q, x)?), 1.0)?;
        Ok(&head + &tail)
    })();
    let rhs = (|| Ok(&p.inverse()? * &gamma_mat(&(&p + &q))?))();
    Ok(vec![d.resid(lhs, rhs)])
}

fn finite_shift(d: &mut Draw, f: fn(&M, f64) -> Result<M>, s: f64) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.1, 10.0);
    let n = d.int("n", 1, 5);
    let lhs = f(&q.shift_re(n as f64), x);
    let rhs = (|| {
        let gn = gamma_mat(&q.shift_re(n as f64))?;
        let mut sum = M::zeros(q.dim());
        for r in 0..n {
            sum += &(&gn * &rgamma_mat(&q.shift_re((r + 1) as f64))?).scale_re(x.powi(r as i32));
        }
        let corr = &pow(x, &q)?.scale_re((-x).exp() * s) * &sum;
        Ok(&(&pochhammer(&q, n) * &f(&q, x)?) + &corr)
    })();
    Ok(vec![d.resid(lhs, rhs)])
}

pub fn eq_2_32(d: &mut Draw) -> Result<Vec<f64>> {
    finite_shift(d, lower, -1.0)
}

pub fn eq_2_33(d: &mut Draw) -> Result<Vec<f64>> {
    finite_shift(d, upper, 1.0)
}

pub fn eq_2_35(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.1, 8.0);
    let lhs = gamma_star(&q, x);
    let q1 = q.shift_re(1.0);
    let printed = (|| Ok(&rgamma_mat(&q1)? * &kummer(&q, &q1, c(x, 0.0))?))();
    let corrected = (|| Ok(&rgamma_mat(&q1)? * &kummer(&q, &q1, c(-x, 0.0))?))();
    let r1 = d.resid(lhs.clone(), printed);
    let r2 = d.resid(lhs, corrected);
    Ok(vec![r1, r2])
}

pub fn eq_2_36(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.1, 8.0);
    let n = q.dim();
    let rhs = (|| Ok(&rgamma_mat(&q)? * &weighted(&q, |t| Ok(id(n).scale_re((-x * t).exp())), 1.0)?))();
    Ok(vec![d.resid(gamma_star(&q, x), rhs)])
}

pub fn eq_2_37(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.1, 10.0);
    let lhs = gamma_star(&q.shift_re(1.0), x).map(|g| g.scale_re(x));
    let rhs = (|| Ok(&gamma_star(&q, x)? - &rgamma_mat(&q.shift_re(1.0))?.scale_re((-x).exp())))();
    Ok(vec![d.resid(lhs, rhs)])
}

pub fn eq_2_38(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = 50.0;
    let dev = (|| Ok((&(&pow(x, &q)? * &gamma_star(&q, x)?) - &id(q.dim())).norm2()))();
    Ok(vec![match dev {
        Ok(v) => v,
        Err(e) => d.failed(e),
    }])
}

pub fn eq_2_39(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.1, 10.0);
    let rhs = (|| Ok(&(&pow(x, &(-&q))? * &lower(&q, x)?) * &rgamma_mat(&q)?))();
    Ok(vec![d.resid(gamma_star(&q, x), rhs)])
}

pub fn eq_2_40(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.1, 4.0);
    Ok(vec![d.resid(gamma_star_alternating(&q, x), gamma_star(&q, x))])
}

/// Partial sums of `Σ_k t_k` until three consecutive terms are negligible.
fn sum_terms(n: usize, mut next: impl FnMut(usize) -> Result<M>) -> Result<M> {
    let mut s = M::zeros(n);
    let mut small = 0;
    for k in 0..4000 {
        let t = next(k)?;
        s += &t;
        if t.norm_fro() <= 1e-17 * (1.0 + s.norm_fro()) {
            small += 1;
            if small == 3 {
                return Ok(s);
            }
        } else {
            small = 0;
        }
    }
    Err(crate::MgfError::Truncation {
        terms: 4000,
        tail_estimate: f64::NAN,
    })
}

pub fn eq_2_41(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.1, 10.0);
    let n = q.dim();
    let rhs = (|| {
        let mut term = q.inverse()?;
        let s = sum_terms(n, |k| {
            if k > 0 {
                term = &term * &q.shift_re(k as f64).inverse()?.scale_re(x);
            }
            Ok(term.clone())
        })?;
        Ok(&pow(x, &q)?.scale_re((-x).exp()) * &s)
    })();
    Ok(vec![d.resid(lower(&q, x), rhs)])
}

pub fn eq_2_42(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.1, 4.0);
    let n = q.dim();
    let rhs = (|| {
        let mut coef = 1.0f64;
        let s = sum_terms(n, |k| {
            if k > 0 {
                coef *= -x / k as f64;
            }
            Ok(q.shift_re(k as f64).inverse()?.scale_re(coef))
        })?;
        Ok(&pow(x, &q)? * &s)
    })();
    Ok(vec![d.resid(lower(&q, x), rhs)])
}

pub fn eq_2_43(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.5, 6.0);
    let mut out = Vec::new();
    for n in 1..=2usize {
        let lhs = fd(|t| Ok((&pow(t, &q)? * &gamma_star(&q, t)?).scale_re(t.exp())), x, n as u8);
        let qn = q.shift_re(-(n as f64));
        let rhs = (|| Ok((&pow(x, &qn)? * &gamma_star(&qn, x)?).scale_re(x.exp())))();
        out.push(d.resid(lhs, rhs));
    }
    Ok(vec![worst(&out)])
}

pub fn eq_2_44(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.5, 8.0);
    let n = q.dim();
    let omq = &id(n) - &q;
    let y = |t: f64| -> Result<M> { Ok((&pow(t, &omq)? * &upper(&q, t)?).scale_re(t.exp())) };
    let y2 = fd(y, x, 2);
    let rhs = (|| {
        let coef = &id(n) + &omq.scale_re(1.0 / x);
        Ok(&(&coef * &fd(y, x, 1)?) - &(&omq * &y(x)?).scale_re(1.0 / (x * x)))
    })();
    Ok(vec![d.resid(y2, rhs)])
}

pub fn eq_2_45(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.5, 8.0);
    let g = |t: f64| gamma_star(&q, t);
    let lhs = fd(g, x, 2).map(|m| m.scale_re(x));
    let rhs = (|| {
        let a = &q.shift_re(x + 1.0) * &fd(g, x, 1)?;
        Ok(-&(&a + &(&q * &g(x)?)))
    })();
    Ok(vec![d.resid(lhs, rhs)])
}
