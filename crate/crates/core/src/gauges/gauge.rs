use std::collections::HashMap;
use std::fmt;

use super::kernel::eps_mu_a;
use crate::cantor::{CantorTree, Side};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::measure::PlanarMeasure;

/// Identifies a ball as the generating disk of a tree node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeTag {
    pub side: Side,
    pub path: Vec<u32>,
    pub mass: f64,
}

/// A closed ball `B(center, radius)`. Tree balls carry their node; abstract
/// (unrealized) trees have no center.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Option<Point>,
    pub radius: f64,
    pub node: Option<NodeTag>,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Self {
        Self {
            center: Some(center),
            radius,
            node: None,
        }
    }

    /// The generating disk of the node at `path` on `side`.
    pub fn node(tree: &CantorTree, side: Side, path: &[u32]) -> Result<Self> {
        let node = tree.node(path)?;
        Ok(Self {
            center: node.center(side),
            radius: node.radius(side),
            node: Some(NodeTag {
                side,
                path: path.to_vec(),
                mass: node.mass(),
            }),
        })
    }

    pub fn center_or_err(&self) -> Result<Point> {
        self.center
            .ok_or_else(|| Error::Gauge("gauge needs ball centers; realize the tree first".into()))
    }

    pub fn node_or_err(&self) -> Result<&NodeTag> {
        self.node
            .as_ref()
            .ok_or_else(|| Error::Gauge("gauge is defined only on tree balls".into()))
    }
}

/// A ball function `ε(B) ≥ 0` with gauge `h(B) = r^γ ε(B)`.
pub trait Gauge: Sync {
    fn eps(&self, ball: &Ball) -> Result<f64>;

    fn gamma(&self) -> f64;

    fn h(&self, ball: &Ball) -> Result<f64> {
        Ok(ball.radius.powf(self.gamma()) * self.eps(ball)?)
    }

    fn description(&self) -> String;
}

/// `ε ≡ value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantGauge {
    pub value: f64,
    pub gamma: f64,
}

impl Gauge for ConstantGauge {
    fn eps(&self, _ball: &Ball) -> Result<f64> {
        Ok(self.value)
    }

    fn gamma(&self) -> f64 {
        self.gamma
    }

    fn description(&self) -> String {
        format!("constant({})", self.value)
    }
}

/// `ε(x, r) = f(r)`.
pub struct RadialGauge {
    f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    gamma: f64,
    label: String,
}

impl RadialGauge {
    pub fn new(
        label: impl Into<String>,
        gamma: f64,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            f: Box::new(f),
            gamma,
            label: label.into(),
        }
    }

    /// `ε(r) = 1 / log(1/r)^β` for `r < 1` and `1` otherwise.
    pub fn inverse_log_power(beta: f64, gamma: f64) -> Self {
        Self::new(format!("1/log(1/r)^{beta}"), gamma, move |r| {
            if r < 1.0 {
                (-r.ln()).powf(-beta).min(1.0)
            } else {
                1.0
            }
        })
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.f)(r)
    }
}

impl fmt::Debug for RadialGauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialGauge")
            .field("label", &self.label)
            .field("gamma", &self.gamma)
            .finish()
    }
}

impl Gauge for RadialGauge {
    fn eps(&self, ball: &Ball) -> Result<f64> {
        Ok(self.eval(ball.radius))
    }

    fn gamma(&self) -> f64 {
        self.gamma
    }

    fn description(&self) -> String {
        self.label.clone()
    }
}

/// `ε_{μ,a}(x, r)` with `γ = 1`.
#[derive(Debug, Clone)]
pub struct DensityGauge {
    pub measure: PlanarMeasure,
    pub a: f64,
}

impl Gauge for DensityGauge {
    fn eps(&self, ball: &Ball) -> Result<f64> {
        Ok(eps_mu_a(
            &self.measure,
            ball.center_or_err()?,
            ball.radius,
            self.a,
        ))
    }

    fn gamma(&self) -> f64 {
        1.0
    }

    fn description(&self) -> String {
        format!("eps_mu_a(a={}, atoms={})", self.a, self.measure.len())
    }
}

/// `h(node ball) = μ(node)`: every cut of the tree costs the total mass.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MassGauge;

impl Gauge for MassGauge {
    fn eps(&self, ball: &Ball) -> Result<f64> {
        Ok(ball.node_or_err()?.mass / ball.radius)
    }

    fn gamma(&self) -> f64 {
        1.0
    }

    fn h(&self, ball: &Ball) -> Result<f64> {
        Ok(ball.node_or_err()?.mass)
    }

    fn description(&self) -> String {
        "mass".into()
    }
}

/// Explicit `h` values per tree node.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TableGauge {
    pub values: HashMap<Vec<u32>, f64>,
}

impl TableGauge {
    pub fn new(values: HashMap<Vec<u32>, f64>) -> Self {
        Self { values }
    }
}

impl Gauge for TableGauge {
    fn eps(&self, ball: &Ball) -> Result<f64> {
        Ok(self.h(ball)? / ball.radius)
    }

    fn gamma(&self) -> f64 {
        1.0
    }

    fn h(&self, ball: &Ball) -> Result<f64> {
        let node = ball.node_or_err()?;
        self.values
            .get(&node.path)
            .copied()
            .ok_or_else(|| Error::Gauge(format!("no table value for node {:?}", node.path)))
    }

    fn description(&self) -> String {
        format!("table({} nodes)", self.values.len())
    }
}

/// Pull-back gauge on target tree balls:
/// `ε(B_target) = ε_{ν,a}(B_source)^{2K/(K+1)}` with `γ = 2/(K+1)`, where
/// `B_source` is the matching source node ball.
#[derive(Debug, Clone)]
pub struct DistortedGauge<'a> {
    tree: &'a CantorTree,
    base: DensityGauge,
    k: f64,
}

impl Gauge for DistortedGauge<'_> {
    fn eps(&self, ball: &Ball) -> Result<f64> {
        let node = match &ball.node {
            Some(node) if node.side == Side::Target => node,
            _ => return Err(Error::Gauge("φ^{-1} known only on tree balls".into())),
        };
        let source = Ball::node(self.tree, Side::Source, &node.path)?;
        let e0 = self.base.eps(&source)?;
        Ok(e0.powf(2.0 * self.k / (self.k + 1.0)))
    }

    fn gamma(&self) -> f64 {
        2.0 / (self.k + 1.0)
    }

    fn description(&self) -> String {
        format!("distorted(K={}, {})", self.k, self.base.description())
    }
}

/// The distorted gauge built from `ε_{ν,a}` on the source side of `tree`.
pub fn distorted_gauge<'a>(
    tree: &'a CantorTree,
    nu: PlanarMeasure,
    a: f64,
    k: f64,
) -> Result<DistortedGauge<'a>> {
    if !(k >= 1.0 && k.is_finite()) {
        return Err(Error::Argument(format!("K = {k} must be ≥ 1")));
    }
    if a.is_nan() || a <= 0.0 {
        return Err(Error::Argument(format!("a = {a} must be positive")));
    }
    if !tree.is_realized() {
        return Err(Error::Unrealized);
    }
    Ok(DistortedGauge {
        tree,
        base: DensityGauge { measure: nu, a },
        k,
    })
}
