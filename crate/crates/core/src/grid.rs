//! Legendre pseudospectral discretisation of the radial interval `[0, r_c]`.
//!
//! Collocation points are `x_0 = -1`, `x_N = 1` and the `N - 1` roots of
//! `P_N'(x)`. Functions are represented by their nodal values through the
//! cardinal functions
//!
//! ```text
//! g_j(x) = -(1 - x^2) P_N'(x) / (N (N+1) P_N(x_j) (x - x_j)),
//! ```
//!
//! and `x` is mapped onto `r` by an affine or an algebraic map. The kinetic
//! operator is assembled in weak (Galerkin with Gauss-Lobatto quadrature)
//! form, which after a diagonal similarity transform with the square roots
//! of the radial quadrature weights is exactly symmetric.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::special::{gauss_legendre, legendre_and_derivative};
use crate::Real;

/// Smallest collocation order accepted by [`legendre_collocation`].
pub const MIN_COLLOCATION_ORDER: usize = 2;
/// Smallest order accepted for a radial grid.
pub const MIN_GRID_ORDER: usize = 8;

/// Collocation data on the reference interval `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct Collocation<T> {
    order: usize,
    nodes: Vec<T>,
    /// `P_N(x_j)`
    legendre_at_nodes: Vec<T>,
    /// Gauss-Lobatto-Legendre weights.
    weights: Vec<T>,
    derivative: Matrix<T>,
    /// `cumulative[i][j] = ∫_{-1}^{x_i} g_j(x) dx`
    cumulative: Matrix<T>,
}

/// Builds the Legendre-Gauss-Lobatto collocation set of order `order`.
pub fn legendre_collocation<T: Real>(order: usize) -> Result<Collocation<T>> {
    if order < MIN_COLLOCATION_ORDER {
        return Err(Error::OrderTooSmall { order, min: MIN_COLLOCATION_ORDER });
    }
    let n = order;
    let nf = T::of(n);
    let nn1 = nf * (nf + T::one());
    let mut nodes = vec![T::zero(); n + 1];
    nodes[0] = -T::one();
    nodes[n] = T::one();
    let tol = T::epsilon() * T::lit(2.0);

    // Interior roots of P_N'; only the lower half is searched and mirrored.
    for j in 1..=n / 2 {
        let guess = |k: usize| -(T::PI() * T::of(k) / nf).cos();
        let (lo, hi) = (guess(j - 1), guess(j + 1));
        let mut x = guess(j);
        let mut converged = false;
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            let d2p = (T::lit(2.0) * x * dp - nn1 * p) / (T::one() - x * x);
            let step = dp / d2p;
            x -= step;
            if step.abs() <= tol * (T::one() + x.abs()) {
                converged = true;
                break;
            }
        }
        if !converged || !(x > lo && x < hi) {
            return Err(Error::RootNotConverged { order: n, index: j, lo: lo.as_f64(), hi: hi.as_f64() });
        }
        nodes[j] = x;
        nodes[n - j] = -x;
    }
    if n % 2 == 0 {
        nodes[n / 2] = T::zero();
    }

    let legendre_at_nodes: Vec<T> = nodes.iter().map(|&x| legendre_and_derivative(n, x).0).collect();
    let weights = legendre_at_nodes.iter().map(|&p| T::lit(2.0) / (nn1 * p * p)).collect();

    let mut colloc = Collocation {
        order: n,
        nodes,
        legendre_at_nodes,
        weights,
        derivative: Matrix::zeros(n + 1),
        cumulative: Matrix::zeros(n + 1),
    };
    colloc.derivative = cardinal_derivative_matrix(&colloc);
    colloc.cumulative = cumulative_integration_matrix(&colloc);
    Ok(colloc)
}

/// `D[i][j] = g_j'(x_i)`.
pub fn cardinal_derivative_matrix<T: Real>(colloc: &Collocation<T>) -> Matrix<T> {
    let n = colloc.order;
    let x = &colloc.nodes;
    let p = &colloc.legendre_at_nodes;
    let mut d = Matrix::zeros(n + 1);
    for i in 0..=n {
        let mut diag = T::zero();
        for j in 0..=n {
            if i != j {
                let v = p[i] / (p[j] * (x[i] - x[j]));
                d.set(i, j, v);
                diag -= v;
            }
        }
        // Rows of D annihilate constants.
        d.set(i, i, diag);
    }
    d
}

fn cumulative_integration_matrix<T: Real>(colloc: &Collocation<T>) -> Matrix<T> {
    let n = colloc.order;
    let (gx, gw) = gauss_legendre::<T>(n / 2 + 2);
    let mut s = Matrix::zeros(n + 1);
    let mut running = vec![T::zero(); n + 1];
    let mut g = vec![T::zero(); n + 1];
    for m in 1..=n {
        let (a, b) = (colloc.nodes[m - 1], colloc.nodes[m]);
        let half = (b - a) / T::lit(2.0);
        let mid = (b + a) / T::lit(2.0);
        let mut piece = vec![T::zero(); n + 1];
        for (&t, &w) in gx.iter().zip(&gw) {
            colloc.cardinals_at(mid + half * t, &mut g);
            for j in 0..=n {
                piece[j] += w * half * g[j];
            }
        }
        for j in 0..=n {
            running[j] += piece[j];
            s.set(m, j, running[j]);
        }
    }
    s
}

impl<T: Real> Collocation<T> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    /// `P_N(x_j)` at every collocation point.
    pub fn legendre_at_nodes(&self) -> &[T] {
        &self.legendre_at_nodes
    }

    /// Gauss-Lobatto-Legendre quadrature weights, exact to degree `2N - 1`.
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn derivative(&self) -> &Matrix<T> {
        &self.derivative
    }

    pub fn cumulative(&self) -> &Matrix<T> {
        &self.cumulative
    }

    /// Evaluates cardinal function `g_j` at `x`; exactly `δ_ij` at node `x_i`.
    pub fn cardinal(&self, j: usize, x: T) -> T {
        if let Some(i) = self.nodes.iter().position(|&xi| xi == x) {
            return if i == j { T::one() } else { T::zero() };
        }
        let (_, dp) = legendre_and_derivative(self.order, x);
        let nf = T::of(self.order);
        -(T::one() - x * x) * dp / (nf * (nf + T::one()) * self.legendre_at_nodes[j] * (x - self.nodes[j]))
    }

    /// Writes every `g_j(x)` into `out` using the barycentric form.
    pub fn cardinals_at(&self, x: T, out: &mut [T]) {
        if let Some(i) = self.nodes.iter().position(|&xi| xi == x) {
            out.iter_mut().for_each(|v| *v = T::zero());
            out[i] = T::one();
            return;
        }
        let mut denom = T::zero();
        for (j, o) in out.iter_mut().enumerate() {
            let term = T::one() / (self.legendre_at_nodes[j] * (x - self.nodes[j]));
            *o = term;
            denom += term;
        }
        out.iter_mut().for_each(|v| *v /= denom);
    }

    /// Barycentric interpolation of nodal values at `x`.
    pub fn interpolate(&self, values: &[T], x: T) -> T {
        let mut num = T::zero();
        let mut den = T::zero();
        for j in 0..=self.order {
            let dx = x - self.nodes[j];
            if dx == T::zero() {
                return values[j];
            }
            let t = T::one() / (self.legendre_at_nodes[j] * dx);
            num += t * values[j];
            den += t;
        }
        num / den
    }
}

/// Radial map `r(x)` from `[-1, 1]` onto `[0, r_c]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mapping<T> {
    /// `r = r_c (1 + x) / 2`
    Affine,
    /// `r = L (1 + x) / (1 - x + 2L/r_c)` with `L = clustering * r_c`;
    /// smaller `clustering` packs more points near the nucleus.
    Algebraic { clustering: T },
}

impl<T: Real> Default for Mapping<T> {
    fn default() -> Self {
        Mapping::Algebraic { clustering: T::lit(0.35) }
    }
}

impl<T: Real> Mapping<T> {
    fn validate(&self) -> Result<()> {
        match *self {
            Mapping::Affine => Ok(()),
            Mapping::Algebraic { clustering } => {
                if clustering > T::zero() && clustering.is_finite() {
                    Ok(())
                } else {
                    Err(Error::NonMonotoneMapping(format!("clustering parameter {clustering} must be positive")))
                }
            }
        }
    }

    /// `(r(x), r'(x))`
    pub fn eval(&self, x: T, r_c: T) -> (T, T) {
        let one = T::one();
        let two = T::lit(2.0);
        match *self {
            Mapping::Affine => (r_c * (one + x) / two, r_c / two),
            Mapping::Algebraic { clustering } => {
                let l = clustering * r_c;
                let beta = two * clustering;
                let den = one - x + beta;
                (l * (one + x) / den, l * (two + beta) / (den * den))
            }
        }
    }

    pub fn inverse(&self, r: T, r_c: T) -> T {
        let one = T::one();
        match *self {
            Mapping::Affine => T::lit(2.0) * r / r_c - one,
            Mapping::Algebraic { clustering } => {
                let l = clustering * r_c;
                let beta = T::lit(2.0) * clustering;
                (r * (one + beta) - l) / (l + r)
            }
        }
    }
}

/// Default collocation order for a confinement radius.
pub fn default_order(r_c: f64) -> usize {
    if r_c <= 10.0 {
        64
    } else {
        96
    }
}

/// Mapped collocation grid on `[0, r_c]`.
#[derive(Debug, Clone)]
pub struct RadialGrid<T> {
    colloc: Arc<Collocation<T>>,
    mapping: Mapping<T>,
    r_c: T,
    r: Vec<T>,
    jacobian: Vec<T>,
    weights: Vec<T>,
}

/// Builds a radial grid of order `order` on `[0, r_c]`.
pub fn build_grid<T: Real>(order: usize, r_c: T, mapping: Mapping<T>) -> Result<RadialGrid<T>> {
    if order < MIN_GRID_ORDER {
        return Err(Error::OrderTooSmall { order, min: MIN_GRID_ORDER });
    }
    let colloc = Arc::new(legendre_collocation(order)?);
    RadialGrid::with_collocation(colloc, r_c, mapping)
}

impl<T: Real> RadialGrid<T> {
    /// Reuses precomputed collocation data (it depends on `N` only).
    pub fn with_collocation(colloc: Arc<Collocation<T>>, r_c: T, mapping: Mapping<T>) -> Result<Self> {
        if !(r_c > T::zero() && r_c.is_finite()) {
            return Err(Error::InvalidRadius(r_c.as_f64()));
        }
        mapping.validate()?;
        let n = colloc.order;
        let mut r = Vec::with_capacity(n + 1);
        let mut jacobian = Vec::with_capacity(n + 1);
        for &x in &colloc.nodes {
            let (rv, jv) = mapping.eval(x, r_c);
            r.push(rv);
            jacobian.push(jv);
        }
        r[0] = T::zero();
        r[n] = r_c;
        for j in 1..=n {
            if !(r[j] > r[j - 1]) || !(jacobian[j] > T::zero()) {
                return Err(Error::NonMonotoneMapping(format!("r is not increasing at node {j}")));
            }
        }
        let weights = colloc.weights.iter().zip(&jacobian).map(|(&w, &j)| w * j).collect();
        Ok(Self { colloc, mapping, r_c, r, jacobian, weights })
    }

    pub fn order(&self) -> usize {
        self.colloc.order
    }

    pub fn r_c(&self) -> T {
        self.r_c
    }

    pub fn mapping(&self) -> Mapping<T> {
        self.mapping
    }

    pub fn collocation(&self) -> &Arc<Collocation<T>> {
        &self.colloc
    }

    pub fn x(&self) -> &[T] {
        &self.colloc.nodes
    }

    pub fn r(&self) -> &[T] {
        &self.r
    }

    pub fn jacobian(&self) -> &[T] {
        &self.jacobian
    }

    /// Weights `W_j` with `∫_0^{r_c} f(r) dr ≈ Σ_j W_j f(r_j)`.
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Indices of the interior nodes `1..N`.
    pub fn interior(&self) -> std::ops::Range<usize> {
        1..self.order()
    }

    /// True when both grids describe the same discretisation.
    pub fn same_as(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.order() == other.order() && self.r_c == other.r_c && self.mapping == other.mapping)
    }

    pub fn integrate(&self, f: &[T]) -> T {
        self.weights.iter().zip(f).map(|(&w, &v)| w * v).sum()
    }

    /// `∫_0^{r_i} f(r) dr` at every node.
    pub fn cumulative_integral(&self, f: &[T]) -> Vec<T> {
        let scaled: Vec<T> = f.iter().zip(&self.jacobian).map(|(&v, &j)| v * j).collect();
        self.colloc.cumulative.mul_vec(&scaled)
    }

    /// `∫_{r_i}^{r_c} f(r) dr` at every node.
    pub fn tail_integral(&self, f: &[T]) -> Vec<T> {
        let cum = self.cumulative_integral(f);
        let total = cum[self.order()];
        cum.iter().map(|&c| total - c).collect()
    }

    /// `df/dr` at every node.
    pub fn derivative(&self, f: &[T]) -> Vec<T> {
        let dfdx = self.colloc.derivative.mul_vec(f);
        dfdx.iter().zip(&self.jacobian).map(|(&d, &j)| d / j).collect()
    }

    /// Interpolates nodal values at radius `r` in `[0, r_c]`.
    pub fn interpolate(&self, values: &[T], r: T) -> T {
        let x = self.mapping.inverse(r, self.r_c).max(-T::one()).min(T::one());
        self.colloc.interpolate(values, x)
    }

    /// Kinetic plus centrifugal operator for angular momentum `l`.
    pub fn channel_operator(&self, l: i64) -> Result<ChannelOperator<T>> {
        channel_operator(self, l)
    }
}

/// `-(1/2) d²/dr² + l(l+1)/(2r²)` on the interior nodes, Dirichlet at both ends,
/// in the symmetric representation `y_i = sqrt(W_i) u(r_i)`.
#[derive(Debug, Clone)]
pub struct ChannelOperator<T> {
    l: usize,
    matrix: Matrix<T>,
    sqrt_weights: Vec<T>,
    inv_r: Vec<T>,
}

pub fn channel_operator<T: Real>(grid: &RadialGrid<T>, l: i64) -> Result<ChannelOperator<T>> {
    if l < 0 {
        return Err(Error::InvalidAngularMomentum(l));
    }
    let l = l as usize;
    let n = grid.order();
    let m = n - 1;
    let d = grid.colloc.derivative();
    let half = T::lit(0.5);
    let stiffness: Vec<T> = grid.colloc.weights.iter().zip(&grid.jacobian).map(|(&w, &j)| half * w / j).collect();
    let sqrt_weights: Vec<T> = grid.weights[1..n].iter().map(|w| w.sqrt()).collect();
    let centrifugal = T::of(l * (l + 1)) / T::lit(2.0);

    let mut matrix = Matrix::zeros(m);
    for a in 0..m {
        let i = a + 1;
        for b in 0..=a {
            let j = b + 1;
            let mut k_ij = T::zero();
            for k in 0..=n {
                k_ij += stiffness[k] * d.get(k, i) * d.get(k, j);
            }
            let v = k_ij / (sqrt_weights[a] * sqrt_weights[b]);
            matrix.set(a, b, v);
            matrix.set(b, a, v);
        }
        let r = grid.r[i];
        let diag = matrix.get(a, a) + centrifugal / (r * r);
        matrix.set(a, a, diag);
    }
    let inv_r = grid.r[1..n].iter().map(|&r| T::one() / r).collect();
    Ok(ChannelOperator { l, matrix, sqrt_weights, inv_r })
}

impl<T: Real> ChannelOperator<T> {
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    /// Square roots of the interior radial weights; `u_i = y_i / sqrt(W_i)`.
    pub fn sqrt_weights(&self) -> &[T] {
        &self.sqrt_weights
    }

    /// Operator plus a local potential given at the interior nodes.
    pub fn with_potential(&self, v: &[T]) -> Matrix<T> {
        let mut h = self.matrix.clone();
        for (a, &va) in v.iter().enumerate() {
            h.set(a, a, h.get(a, a) + va);
        }
        h
    }

    /// Confined hydrogenic Hamiltonian for nuclear charge `z`.
    pub fn hydrogenic(&self, z: T) -> Matrix<T> {
        let v: Vec<T> = self.inv_r.iter().map(|&ir| -z * ir).collect();
        self.with_potential(&v)
    }
}
