//! Three rational sextics of types (1,2,3), (2,3,1), (3,1,2) with nodes on the
//! contact line, and the conic bundle built from their union.

use rand::Rng;
use serde::Serialize;

use super::PipelineError;
use crate::cayley::{type_to_linear_conditions, LineConfig};
use crate::conic::GradedConicBundle;
use crate::construct::{
    combine, determinantal_rep, genericity_check, line_points, lift_to_p3, sqrt_mod_contact, Condition,
    LinearSystem, SqrtModContact,
};
use crate::poly::{Monomial, MultiPoly, ProjPoint, Vars};

pub const TYPES: [[u32; 3]; 3] = [[1, 2, 3], [2, 3, 1], [3, 1, 2]];

/// A point on the contact line with its line coordinates (l:m) for the chart
/// l*P + m*Q.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinePoint {
    pub point: ProjPoint,
    pub lm: (u64, u64),
}

#[derive(Debug, Clone)]
pub struct C666Instance {
    pub cfg: LineConfig,
    pub chart: (ProjPoint, ProjPoint),
    /// P1..P6
    pub nodes: Vec<LinePoint>,
    /// Q1..Q4
    pub q: [LinePoint; 4],
    pub curves: [MultiPoly; 3],
    pub q3_equals_q4: bool,
}

impl C666Instance {
    pub fn product(&self) -> MultiPoly {
        self.curves[0].mul(&self.curves[1]).mul(&self.curves[2])
    }

    /// The nine nodes of D on the contact line: P1..P6, Q1, Q2, Q3.
    pub fn contact_nodes(&self) -> Vec<ProjPoint> {
        let mut v: Vec<ProjPoint> = self.nodes.iter().map(|n| n.point.clone()).collect();
        v.extend(self.q[..3].iter().map(|n| n.point.clone()));
        v
    }

    /// Nodes of curve i prescribed by the construction.
    pub fn own_nodes(&self, i: usize) -> [ProjPoint; 2] {
        [self.nodes[2 * i].point.clone(), self.nodes[2 * i + 1].point.clone()]
    }
}

fn line_point(chart: &(ProjPoint, ProjPoint), l: u64, m: u64) -> LinePoint {
    let f = chart.0.field();
    let c: Vec<u64> =
        (0..3).map(|i| f.add(f.mul(l, chart.0.coords()[i]), f.mul(m, chart.1.coords()[i]))).collect();
    LinePoint { point: ProjPoint::new(f, &c).expect("distinct chart points"), lm: (l, m) }
}

fn binary_linear(pt: &LinePoint) -> MultiPoly {
    let f = pt.point.field();
    // vanishes at (l0:m0): m0*l - l0*m
    MultiPoly::linear(f, &Vars::binary(), &[pt.lm.1, f.neg(pt.lm.0)])
}

/// The residual intersection of `curve` with the contact line after removing
/// the known points with multiplicities.
fn residual_point(
    curve: &MultiPoly,
    chart: &(ProjPoint, ProjPoint),
    known: &[(&LinePoint, usize)],
) -> Result<LinePoint, PipelineError> {
    let f = curve.field();
    let mut h = curve.restrict_to_line(&chart.0, &chart.1)?;
    for (pt, mult) in known {
        for _ in 0..*mult {
            h = h.exact_div(&binary_linear(pt)).map_err(|_| PipelineError::IncidenceFailure(format!(
                "curve does not meet the contact line at {} with multiplicity {mult}",
                pt.point
            )))?;
        }
    }
    if h.homogeneous_degree() != Some(1) {
        return Err(PipelineError::IncidenceFailure("residual intersection is not a single point".into()));
    }
    let a = h.coeff(&Monomial::var(0, 1));
    let b = h.coeff(&Monomial::var(1, 1));
    Ok(line_point(chart, f.neg(b), a))
}

fn unique_curve(
    cfg: &LineConfig,
    index: usize,
    nodes: [&LinePoint; 2],
    through: &LinePoint,
) -> Result<MultiPoly, PipelineError> {
    let tc = type_to_linear_conditions(TYPES[index], cfg);
    let mut sys = LinearSystem::new(cfg.field(), tc.degree);
    for (_, pt, m) in tc.points {
        sys = sys.with(Condition::Multiplicity(pt, m));
    }
    for n in nodes {
        sys = sys.with(Condition::Multiplicity(n.point.clone(), 2));
    }
    sys = sys.with(Condition::Multiplicity(through.point.clone(), 1));
    let basis = sys.solve()?;
    if basis.len() != 1 {
        return Err(PipelineError::NonUniqueCurve { curve: index + 1, dimension: basis.len() });
    }
    Ok(basis[0].monic())
}

/// Draw P1..P6, Q1 on the contact line and solve for D1, D2, D3.
pub fn run_c666<R: Rng>(cfg: &LineConfig, rng: &mut R) -> Result<C666Instance, PipelineError> {
    let f = cfg.field();
    let chart = line_points(cfg.contact());
    let mut chosen: Vec<LinePoint> = Vec::new();
    while chosen.len() < 7 {
        let lp = line_point(&chart, rng.gen_range(0..f.modulus()), 1);
        let on_exceptional = cfg.lines().iter().any(|l| l.vanishes_at(&lp.point));
        if !on_exceptional && chosen.iter().all(|c| c.point != lp.point) {
            chosen.push(lp);
        }
    }
    let q1 = chosen.pop().unwrap();
    let nodes = chosen;

    let d1 = unique_curve(cfg, 0, [&nodes[0], &nodes[1]], &q1)?;
    let q2 = residual_point(&d1, &chart, &[(&nodes[0], 2), (&nodes[1], 2), (&q1, 1)])?;
    let d2 = unique_curve(cfg, 1, [&nodes[2], &nodes[3]], &q1)?;
    let q3 = residual_point(&d2, &chart, &[(&nodes[2], 2), (&nodes[3], 2), (&q1, 1)])?;
    let d3 = unique_curve(cfg, 2, [&nodes[4], &nodes[5]], &q2)?;
    let q4 = residual_point(&d3, &chart, &[(&nodes[4], 2), (&nodes[5], 2), (&q2, 1)])?;
    let q3_equals_q4 = q3.point == q4.point;
    Ok(C666Instance { cfg: cfg.clone(), chart, nodes, q: [q1, q2, q3, q4], curves: [d1, d2, d3], q3_equals_q4 })
}

/// Everything produced on the way from the plane curve to the bundle N.
#[derive(Debug, Clone)]
pub struct Example {
    pub instance: C666Instance,
    /// Equation of D scaled so its restriction to the contact line is a square.
    pub f: MultiPoly,
    pub sqrt: SqrtModContact,
    /// Transform of the contact quadric on P^2.
    pub q: MultiPoly,
    pub t: MultiPoly,
    /// The linear Cayley bundle.
    pub a: GradedConicBundle,
    pub q_bar: MultiPoly,
    pub r_bar: MultiPoly,
    pub t_bar: MultiPoly,
    pub r_lift_kernel: usize,
    pub t_lift_kernel: usize,
    /// det of [[q_bar, r_bar], [r_bar, t_bar]]: the sextic X6.
    pub x6: MultiPoly,
    pub n: GradedConicBundle,
}

impl Example {
    pub fn phi(&self) -> [MultiPoly; 4] {
        self.instance.cfg.parametrization()
    }
}

/// Run the full construction for one draw of configuration and points.
pub fn build_example<R: Rng>(cfg: &LineConfig, rng: &mut R) -> Result<Example, PipelineError> {
    let gen = genericity_check(cfg, 6)?;
    if !gen.passed {
        return Err(PipelineError::Genericity(gen.rank));
    }
    let inst = run_c666(cfg, rng)?;
    if !inst.q3_equals_q4 {
        return Err(PipelineError::Q3NotQ4);
    }
    let field = cfg.field();
    let raw = inst.product();
    let (p, q) = &inst.chart;
    let (_, c) = raw.restrict_to_line(p, q)?.sqrt_binary_form()?;
    let f = raw.scale(field.inv(c.value()).expect("nonzero"));
    let sqrt = sqrt_mod_contact(&f, cfg, &inst.contact_nodes(), 6)?;
    let a = cfg.cayley_matrix();
    let q_bar = a.lower_right_minor();
    let phi = cfg.parametrization();
    let q_plane = q_bar.substitute(&phi)?;
    let t = determinantal_rep(&f, &q_plane, &sqrt.g)?;
    let r_lift = lift_to_p3(&sqrt.g, &phi, 3)?;
    let t_lift = lift_to_p3(&t, &phi, 4)?;
    let (r_bar, t_bar) = (r_lift.form, t_lift.form);
    let x6 = q_bar.mul(&t_bar).sub(&r_bar.mul(&r_bar));
    if x6.substitute(&phi)?.proportional(&f).is_none() {
        return Err(PipelineError::IncidenceFailure("det of the lifted matrix does not pull back to D".into()));
    }
    let combined = combine(&a, &t_bar, &r_bar)?;
    Ok(Example {
        instance: inst,
        f,
        sqrt,
        q: q_plane,
        t,
        a,
        q_bar,
        r_bar,
        t_bar,
        r_lift_kernel: r_lift.kernel_dim,
        t_lift_kernel: t_lift.kernel_dim,
        x6,
        n: combined.n,
    })
}

/// Log entry of one construction attempt.
#[derive(Debug, Clone, Serialize)]
pub struct Attempt {
    pub index: usize,
    pub outcome: String,
    pub q3_equals_q4: Option<bool>,
}

/// Draw configurations until an example is built or the budget runs out.
pub fn build_with_retries<R: Rng>(
    field: crate::gf::Fp,
    rng: &mut R,
    retries: usize,
) -> Result<(Example, Vec<Attempt>), Vec<Attempt>> {
    let mut log = Vec::new();
    for index in 0..=retries {
        let cfg = match LineConfig::random(field, rng) {
            Ok(c) => c,
            Err(e) => {
                log.push(Attempt { index, outcome: format!("line configuration rejected: {e}"), q3_equals_q4: None });
                continue;
            }
        };
        match build_example(&cfg, rng) {
            Ok(ex) => {
                log.push(Attempt { index, outcome: "ok".into(), q3_equals_q4: Some(true) });
                return Ok((ex, log));
            }
            Err(e) => {
                let q34 = matches!(e, PipelineError::Q3NotQ4).then_some(false);
                log.push(Attempt { index, outcome: e.to_string(), q3_equals_q4: q34 });
            }
        }
    }
    Err(log)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Fp;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn config(field: Fp, rng: &mut ChaCha8Rng) -> LineConfig {
        loop {
            if let Ok(c) = LineConfig::random(field, rng) {
                return c;
            }
        }
    }

    #[test]
    fn residual_points_coincide() {
        let field = Fp::new(10007).unwrap();
        for seed in 0..4u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cfg = config(field, &mut rng);
            let inst = run_c666(&cfg, &mut rng).unwrap();
            assert!(inst.q3_equals_q4, "seed {seed}");
            for i in 0..3 {
                for pt in inst.own_nodes(i) {
                    assert!(inst.curves[i].vanishes_at(&pt));
                }
            }
        }
    }

    #[test]
    fn example_pulls_back_to_d() {
        let field = Fp::new(10007).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cfg = config(field, &mut rng);
        let ex = build_example(&cfg, &mut rng).unwrap();
        let pulled = ex.x6.substitute(&ex.phi()).unwrap();
        assert!(pulled.proportional(&ex.f).is_some());
        assert_eq!(ex.n.discriminant(), ex.a.discriminant().mul(&ex.x6).neg());
    }
}
