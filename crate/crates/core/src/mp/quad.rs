use super::{cabs, Precision};
use crate::error::{Error, Result};

use rug::{Complex, Float};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Gauss-Legendre rule on `[-1, 1]` with nodes found by Newton iteration on
/// the Legendre polynomial at working precision.
#[derive(Debug)]
pub struct GaussLegendre {
    nodes: Vec<Float>,
    weights: Vec<Float>,
}

impl GaussLegendre {
    /// Returns the rule of the given order, computing it once per precision.
    pub fn new(order: usize, prec: Precision) -> Result<Arc<GaussLegendre>> {
        type Cache = Mutex<HashMap<(usize, u32), Arc<GaussLegendre>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let key = (order, prec.bits());
        if let Some(rule) = cache.lock().unwrap().get(&key) {
            return Ok(rule.clone());
        }
        let rule = Arc::new(Self::compute(order, prec)?);
        cache.lock().unwrap().insert(key, rule.clone());
        Ok(rule)
    }

    fn compute(order: usize, prec: Precision) -> Result<GaussLegendre> {
        if order == 0 {
            return Err(Error::NodeSearch(0));
        }
        let bits = prec.bits();
        let n = order;
        let tol = prec.ten_pow_neg(prec.digits() as i32 + 2);
        let mut nodes = vec![Float::new(bits); n];
        let mut weights = vec![Float::new(bits); n];
        for i in 0..n.div_ceil(2) {
            let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut x = Float::with_val(bits, guess);
            let mut converged = false;
            let mut deriv = Float::new(bits);
            for _ in 0..100 {
                let (p, dp): (Float, Float) = legendre(n, &x);
                let dx = Float::with_val(bits, &p / &dp);
                x -= &dx;
                deriv = dp;
                if dx.abs() < tol {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::NodeSearch(order));
            }
            let (_, dp) = legendre(n, &x);
            if !dp.is_zero() {
                deriv = dp;
            }
            let one_minus_x2 = 1 - Float::with_val(bits, x.square_ref());
            let w: Float = Float::with_val(bits, 2) / (one_minus_x2 * deriv.square());
            nodes[i] = x.clone();
            weights[i] = w.clone();
            nodes[n - 1 - i] = -x;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = Float::new(bits);
        }
        Ok(GaussLegendre { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F>(&self, a: &Float, b: &Float, mut f: F) -> Complex
    where
        F: FnMut(&Float) -> Complex,
    {
        let bits = self.nodes[0].prec();
        let half = Float::with_val(bits, b - a) / 2u32;
        let mid = Float::with_val(bits, a + b) / 2u32;
        let mut acc = Complex::new(bits);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let t = Float::with_val(bits, x * &half) + &mid;
            acc += f(&t) * w;
        }
        acc * half
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: &Float, b: &Float) -> Vec<(Float, Float)> {
        let bits = self.nodes[0].prec();
        let half = Float::with_val(bits, b - a) / 2u32;
        let mid = Float::with_val(bits, a + b) / 2u32;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| {
                (
                    Float::with_val(bits, x * &half) + &mid,
                    Float::with_val(bits, w * &half),
                )
            })
            .collect()
    }
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let bits = x.prec();
    let mut p0 = Float::with_val(bits, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let k = k as u32;
        let p2 = (Float::with_val(bits, x * &p1) * (2 * k - 1)
            - Float::with_val(bits, &p0 * (k - 1)))
            / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (Float::with_val(bits, 1), Float::new(bits));
    }
    let x2m1 = Float::with_val(bits, x.square_ref()) - 1u32;
    let dp = (Float::with_val(bits, x * &p1) - &p0) * n as u32 / x2m1;
    (p1, dp)
}

/// Gauss-Legendre estimate of `∫_a^b f`.
pub fn quad_gl<F>(f: F, a: &Float, b: &Float, order: usize, prec: Precision) -> Result<Complex>
where
    F: FnMut(&Float) -> Complex,
{
    let rule = GaussLegendre::new(order, prec)?;
    Ok(rule.integrate(a, b, f))
}

/// One abscissa of the tanh-sinh rule on `[-1, 1]`, stored by its distance
/// `d` from the nearer endpoint so that points crowding the endpoints keep
/// full relative accuracy.
#[derive(Debug, Clone)]
struct TsNode {
    dist: Float,
    weight: Float,
}

/// Nodes for `t = j h` at one level, `t >= 0`. Level 0 holds `j = 0, 1, ..`
/// with `h = 1/2`; level `k > 0` holds the odd multiples of `2^{-k-1}`.
#[derive(Debug)]
struct TsLevel {
    nodes: Vec<TsNode>,
}

const TS_T_MAX: f64 = 7.0;

fn ts_levels(prec: Precision, levels: usize) -> Arc<Vec<TsLevel>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<TsLevel>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let bits = prec.bits();
    if let Some(t) = cache.lock().unwrap().get(&bits) {
        if t.len() >= levels {
            return t.clone();
        }
    }
    let mut table = Vec::with_capacity(levels);
    let half_pi = prec.pi() / 2u32;
    for k in 0..levels {
        let h = 0.5f64.powi(k as i32 + 1);
        let mut nodes = Vec::new();
        let mut j: u64 = if k == 0 { 0 } else { 1 };
        let step = if k == 0 { 1 } else { 2 };
        loop {
            let t = j as f64 * h;
            if t > TS_T_MAX {
                break;
            }
            let tf = Float::with_val(bits, j) * Float::with_val(bits, h);
            let u = Float::with_val(bits, tf.sinh_ref()) * &half_pi;
            // d = 1 / (1 + e^{2u}); weight = (pi/2) cosh t / cosh^2 u
            let e2u = Float::with_val(bits, &u * 2u32).exp();
            let dist: Float = Float::with_val(bits, 1) / (e2u + 1u32);
            let cu = u.cosh();
            let weight: Float = Float::with_val(bits, tf.cosh_ref()) * &half_pi / cu.square();
            if dist.is_zero() || weight.is_zero() {
                break;
            }
            nodes.push(TsNode { dist, weight });
            j += step;
        }
        table.push(TsLevel { nodes });
    }
    let table = Arc::new(table);
    cache.lock().unwrap().insert(bits, table.clone());
    table
}

/// Tanh-sinh estimate of `∫_a^b f` to the default tolerance
/// `10^(-digits+10)`, doubling the node density up to `levels` times.
pub fn quad_ts<F>(f: F, a: &Float, b: &Float, levels: usize, prec: Precision) -> Result<Complex>
where
    F: FnMut(&Float) -> Complex,
{
    quad_ts_tol(f, a, b, levels, &prec.quad_tol(), prec)
}

/// Tanh-sinh quadrature with an explicit relative tolerance.
///
/// The integrand is never evaluated at the endpoints, so algebraic endpoint
/// singularities with exponent above -1 are handled.
pub fn quad_ts_tol<F>(
    mut f: F,
    a: &Float,
    b: &Float,
    levels: usize,
    tol: &Float,
    prec: Precision,
) -> Result<Complex>
where
    F: FnMut(&Float) -> Complex,
{
    let bits = prec.bits();
    let levels = levels.max(4);
    let table = ts_levels(prec, levels);
    let width = Float::with_val(bits, b - a);
    let half_width = Float::with_val(bits, &width / 2u32);
    let cutoff = prec.ten_pow_neg(prec.digits() as i32 + 8);

    // Sums f over the level's nodes with weights, truncating each tail once
    // terms stay negligible relative to the running scale.
    let mut scale = Float::with_val(bits, 0);
    let mut level_sum = |level: &TsLevel, scale: &mut Float, l1: &mut Float| -> Complex {
        let mut acc = Complex::new(bits);
        for side in [0u8, 1] {
            let mut quiet = 0;
            for (idx, node) in level.nodes.iter().enumerate() {
                let centre = idx == 0 && node.dist == 0.5;
                if centre && side == 1 {
                    continue;
                }
                let x = if side == 0 {
                    Float::with_val(bits, b - Float::with_val(bits, &width * &node.dist))
                } else {
                    Float::with_val(bits, a + Float::with_val(bits, &width * &node.dist))
                };
                if x == *a || x == *b {
                    break;
                }
                let term = f(&x) * &node.weight;
                let mag = cabs(&term);
                *l1 += &mag;
                if mag > *scale {
                    *scale = mag.clone();
                }
                acc += term;
                if mag <= Float::with_val(bits, &*scale * &cutoff) {
                    quiet += 1;
                    if quiet >= 3 {
                        break;
                    }
                } else {
                    quiet = 0;
                }
            }
        }
        acc
    };

    let mut raw = Complex::new(bits);
    let mut l1 = Float::new(bits);
    let mut prev: Option<Complex> = None;
    let mut before: Option<Complex> = None;
    for (k, level) in table.iter().take(levels).enumerate() {
        raw += level_sum(level, &mut scale, &mut l1);
        let h = 0.5f64.powi(k as i32 + 1);
        let est = Complex::with_val(bits, &raw * &half_width) * Float::with_val(bits, h);
        if let Some(p) = prev.as_ref() {
            let diff = cabs(&Complex::with_val(bits, &est - p));
            let l1_est = Float::with_val(bits, &l1 * &half_width) * h;
            let mut floor = cabs(&est);
            let l1_floor = l1_est * prec.ten_pow_neg(5);
            if l1_floor > floor {
                floor = l1_floor;
            }
            if k >= 3 && diff <= Float::with_val(bits, tol * &floor) {
                return Ok(est);
            }
        }
        before = prev.take();
        prev = Some(est);
    }
    let show = |z: Option<Complex>| z.map(|z| format!("{z:.20}")).unwrap_or_default();
    Err(Error::QuadratureConvergence {
        last: show(prev),
        previous: show(before),
    })
}
