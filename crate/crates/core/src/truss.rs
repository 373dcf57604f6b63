//! Planar truss ground structures and the eigenfrequency pencil
//! `(−K(x), M(x) + M0)`.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feasible::FeasibleSet;
use crate::linalg::SymMatrix;
use crate::pencil::AffinePencil;

pub const STEEL_E: f64 = 200e9;
pub const STEEL_RHO: f64 = 7.86e3;
pub const DEFAULT_MASS: f64 = 1e7;
pub const DEFAULT_V0: f64 = 0.1;
pub const DEFAULT_XMIN: f64 = 1e-8;

/// Relative tolerance of the collinearity filter.
const COLLINEAR_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GroundStructure {
    nodes: Vec<[f64; 2]>,
    fixed: Vec<usize>,
    members: Vec<(usize, usize)>,
    lengths: Vec<f64>,
    /// Global dof → free dof index.
    free: Vec<Option<usize>>,
    n_free: usize,
}

/// All node pairs whose open segment contains no other node (within
/// `tol` distance), in lexicographic order.
pub fn ground_members(nodes: &[[f64; 2]], tol: f64) -> Vec<(usize, usize)> {
    let mut members = Vec::new();
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let [ax, ay] = nodes[i];
            let [bx, by] = nodes[j];
            let (dx, dy) = (bx - ax, by - ay);
            let len = dx.hypot(dy);
            let blocked = (0..nodes.len()).filter(|&k| k != i && k != j).any(|k| {
                let [px, py] = nodes[k];
                let t = ((px - ax) * dx + (py - ay) * dy) / (len * len);
                let dist = ((px - ax) * dy - (py - ay) * dx).abs() / len;
                t > 0.0 && t < 1.0 && dist <= tol
            });
            if !blocked {
                members.push((i, j));
            }
        }
    }
    members
}

fn min_spacing(nodes: &[[f64; 2]]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let d = (nodes[i][0] - nodes[j][0]).hypot(nodes[i][1] - nodes[j][1]);
            if d > 0.0 {
                best = best.min(d);
            }
        }
    }
    if best.is_finite() {
        best
    } else {
        1.0
    }
}

impl GroundStructure {
    /// `members = None` generates the collinearity-filtered complete set.
    pub fn new(
        nodes: Vec<[f64; 2]>,
        fixed_dofs: Vec<usize>,
        members: Option<Vec<(usize, usize)>>,
    ) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidTruss("at least two nodes are required".into()));
        }
        if nodes.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("node coordinate"));
        }
        let dofs = 2 * nodes.len();
        let mut fixed = fixed_dofs;
        fixed.sort_unstable();
        fixed.dedup();
        if let Some(&d) = fixed.iter().find(|&&d| d >= dofs) {
            return Err(Error::DofOutOfRange {
                what: "fixed dof",
                index: d,
                limit: dofs,
            });
        }
        if fixed.len() < 3 {
            return Err(Error::UnderConstrained { fixed: fixed.len() });
        }
        let members = match members {
            Some(list) => {
                let mut seen = std::collections::HashSet::new();
                for &(a, b) in &list {
                    for node in [a, b] {
                        if node >= nodes.len() {
                            return Err(Error::DofOutOfRange {
                                what: "member node",
                                index: node,
                                limit: nodes.len(),
                            });
                        }
                    }
                    if !seen.insert((a.min(b), a.max(b))) {
                        return Err(Error::InvalidTruss(format!("duplicate member ({a}, {b})")));
                    }
                }
                list
            }
            None => ground_members(&nodes, COLLINEAR_TOL * min_spacing(&nodes)),
        };
        if members.is_empty() {
            return Err(Error::InvalidTruss("no members".into()));
        }
        let lengths: Vec<f64> = members
            .iter()
            .map(|&(a, b)| (nodes[a][0] - nodes[b][0]).hypot(nodes[a][1] - nodes[b][1]))
            .collect();
        if let Some(e) = lengths.iter().position(|&l| !(l > 0.0)) {
            return Err(Error::InvalidTruss(format!("member {e} has zero length")));
        }
        let mut free = vec![None; dofs];
        let mut n_free = 0;
        for (d, slot) in free.iter_mut().enumerate() {
            if fixed.binary_search(&d).is_err() {
                *slot = Some(n_free);
                n_free += 1;
            }
        }
        if n_free == 0 {
            return Err(Error::InvalidTruss("every dof is fixed".into()));
        }
        Ok(Self {
            nodes,
            fixed,
            members,
            lengths,
            free,
            n_free,
        })
    }

    /// `gx × gy` nodes with the given spacing; node `(i, j)` has index
    /// `i + gx·j` and coordinates `(i·spacing, j·spacing)`.
    pub fn grid(gx: usize, gy: usize, spacing: f64, supports: &Supports) -> Result<Self> {
        if gx == 0 || gy == 0 || gx * gy < 2 {
            return Err(Error::InvalidTruss(format!("grid {gx}x{gy} has fewer than two nodes")));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidTruss(format!("spacing {spacing} must be positive")));
        }
        let nodes = (0..gy)
            .flat_map(|j| (0..gx).map(move |i| [i as f64 * spacing, j as f64 * spacing]))
            .collect();
        Self::new(nodes, supports.dofs(gx, gy)?, None)
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn fixed_dofs(&self) -> &[usize] {
        &self.fixed
    }

    pub fn members(&self) -> &[(usize, usize)] {
        &self.members
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    /// Pencil order: the number of free dofs.
    pub fn free_dofs(&self) -> usize {
        self.n_free
    }

    pub fn free_index(&self, dof: usize) -> Option<usize> {
        self.free.get(dof).copied().flatten()
    }

    pub fn node_fixed(&self, node: usize) -> bool {
        self.free_index(2 * node).is_none() && self.free_index(2 * node + 1).is_none()
    }
}

/// Which grid nodes are fully supported.
#[derive(Debug, Clone, PartialEq)]
pub enum Supports {
    /// Every node with `i = 0`.
    LeftEdge,
    /// The four corner nodes.
    Corners,
    /// Grid coordinates `(i, j)`.
    Nodes(Vec<(usize, usize)>),
}

impl Supports {
    pub fn dofs(&self, gx: usize, gy: usize) -> Result<Vec<usize>> {
        let nodes: Vec<(usize, usize)> = match self {
            Supports::LeftEdge => (0..gy).map(|j| (0, j)).collect(),
            Supports::Corners => {
                let mut c = vec![(0, 0), (gx - 1, 0), (0, gy - 1), (gx - 1, gy - 1)];
                c.sort_unstable();
                c.dedup();
                c
            }
            Supports::Nodes(list) => list.clone(),
        };
        let mut dofs = Vec::with_capacity(2 * nodes.len());
        for (i, j) in nodes {
            let idx = grid_node(gx, gy, i, j)?;
            dofs.extend([2 * idx, 2 * idx + 1]);
        }
        Ok(dofs)
    }
}

impl FromStr for Supports {
    type Err = Error;

    /// `left`, `corners`, or `i,j;i,j;...`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "left" => Ok(Supports::LeftEdge),
            "corners" => Ok(Supports::Corners),
            "" => Ok(Supports::Nodes(Vec::new())),
            list => list
                .split(';')
                .map(parse_pair)
                .collect::<Result<Vec<_>>>()
                .map(Supports::Nodes),
        }
    }
}

fn parse_pair(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("expected grid node 'i,j', found '{s}'"));
    let (i, j) = s.split_once(',').ok_or_else(bad)?;
    Ok((i.trim().parse().map_err(|_| bad())?, j.trim().parse().map_err(|_| bad())?))
}

fn grid_node(gx: usize, gy: usize, i: usize, j: usize) -> Result<usize> {
    if i >= gx {
        return Err(Error::DofOutOfRange {
            what: "grid column",
            index: i,
            limit: gx,
        });
    }
    if j >= gy {
        return Err(Error::DofOutOfRange {
            what: "grid row",
            index: j,
            limit: gy,
        });
    }
    Ok(i + gx * j)
}

/// Non-structural mass on both dofs of `node`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointMass {
    pub node: usize,
    pub mass: f64,
}

/// Parses `i,j:mass;...` on a `gx`-wide grid.
pub fn parse_grid_masses(s: &str, gx: usize, gy: usize) -> Result<Vec<PointMass>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|part| {
            let (at, mass) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected 'i,j:mass', found '{part}'")))?;
            let (i, j) = parse_pair(at)?;
            let mass = mass
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad mass '{mass}'")))?;
            Ok(PointMass {
                node: grid_node(gx, gy, i, j)?,
                mass,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrussModel {
    pub ground: GroundStructure,
    pub young: f64,
    pub density: f64,
    pub masses: Vec<PointMass>,
    pub stiffness: Vec<SymMatrix>,
    pub mass: Vec<SymMatrix>,
    pub m0: SymMatrix,
}

impl TrussModel {
    /// `K_e = (E/l_e) d dᵀ`, `M_e = (ρ l_e/6)[2 1; 1 2] ⊗ I₂`, both on free dofs.
    pub fn assemble(ground: GroundStructure, young: f64, density: f64, masses: Vec<PointMass>) -> Result<Self> {
        if !(young > 0.0 && young.is_finite()) {
            return Err(Error::InvalidTruss(format!("E = {young} must be positive")));
        }
        if !(density > 0.0 && density.is_finite()) {
            return Err(Error::InvalidTruss(format!("rho = {density} must be positive")));
        }
        let n = ground.free_dofs();
        let mut stiffness = Vec::with_capacity(ground.members.len());
        let mut mass = Vec::with_capacity(ground.members.len());
        for (&(a, b), &len) in ground.members.iter().zip(&ground.lengths) {
            let c = [
                (ground.nodes[b][0] - ground.nodes[a][0]) / len,
                (ground.nodes[b][1] - ground.nodes[a][1]) / len,
            ];
            let dofs = [2 * a, 2 * a + 1, 2 * b, 2 * b + 1];
            let d = [-c[0], -c[1], c[0], c[1]];
            let mut k = SymMatrix::zeros(n);
            let mut m = SymMatrix::zeros(n);
            let (ks, ms) = (young / len, density * len / 6.0);
            for p in 0..4 {
                let Some(fp) = ground.free_index(dofs[p]) else { continue };
                for q in p..4 {
                    let Some(fq) = ground.free_index(dofs[q]) else { continue };
                    let kv = ks * d[p] * d[q];
                    // Same axis couples with weight 2 (same node) or 1 (other node).
                    let mv = if p % 2 != q % 2 {
                        0.0
                    } else if p == q {
                        2.0 * ms
                    } else {
                        ms
                    };
                    k.add_at(fp, fq, kv);
                    m.add_at(fp, fq, mv);
                }
            }
            stiffness.push(k);
            mass.push(m);
        }
        let mut m0 = SymMatrix::zeros(n);
        for pm in &masses {
            if pm.node >= ground.nodes.len() {
                return Err(Error::DofOutOfRange {
                    what: "point-mass node",
                    index: pm.node,
                    limit: ground.nodes.len(),
                });
            }
            if !(pm.mass >= 0.0 && pm.mass.is_finite()) {
                return Err(Error::InvalidTruss(format!("mass {} must be nonnegative", pm.mass)));
            }
            for dof in [2 * pm.node, 2 * pm.node + 1] {
                if let Some(f) = ground.free_index(dof) {
                    m0.add_at(f, f, pm.mass);
                }
            }
        }
        Ok(Self {
            ground,
            young,
            density,
            masses,
            stiffness,
            mass,
            m0,
        })
    }

    pub fn members(&self) -> usize {
        self.stiffness.len()
    }

    /// `A_e = −K_e`, `A0 = 0`, `B_e = M_e`, `B0 = M0`.
    pub fn pencil(&self) -> AffinePencil {
        let n = self.ground.free_dofs();
        AffinePencil::new(
            SymMatrix::zeros(n),
            self.stiffness.iter().map(|k| k.scaled(-1.0)).collect(),
            self.m0.clone(),
            self.mass.clone(),
        )
        .expect("assembled matrices share the free-dof order")
    }

    pub fn stiffness_at(&self, x: &[f64]) -> SymMatrix {
        combine(&self.stiffness, x, SymMatrix::zeros(self.ground.free_dofs()))
    }

    /// `M(x) + M0`.
    pub fn mass_at(&self, x: &[f64]) -> SymMatrix {
        combine(&self.mass, x, self.m0.clone())
    }
}

fn combine(terms: &[SymMatrix], x: &[f64], mut acc: SymMatrix) -> SymMatrix {
    for (t, &xe) in terms.iter().zip(x) {
        acc.axpy(xe, t);
    }
    acc
}

/// A truss model together with its pencil and volume constraint.
#[derive(Debug, Clone)]
pub struct TrussProblem {
    pub model: TrussModel,
    pub pencil: AffinePencil,
    pub set: FeasibleSet,
}

impl TrussProblem {
    pub fn new(model: TrussModel, volume: f64, x_min: f64) -> Result<Self> {
        let set = FeasibleSet::new(model.ground.lengths().to_vec(), volume, x_min)?;
        let pencil = model.pencil();
        Ok(Self { model, pencil, set })
    }

    pub fn to_json(&self) -> TrussJson {
        let g = &self.model.ground;
        TrussJson {
            nodes: g.nodes.clone(),
            fixed: g.fixed.clone(),
            members: Some(g.members.iter().map(|&(a, b)| [a, b]).collect()),
            young: self.model.young,
            rho: self.model.density,
            point_masses: self.model.masses.clone(),
            v0: self.set.volume(),
            xmin: self.set.x_min(),
        }
    }

    pub fn from_json(j: &TrussJson) -> Result<Self> {
        let members = j
            .members
            .as_ref()
            .map(|list| list.iter().map(|&[a, b]| (a, b)).collect());
        let ground = GroundStructure::new(j.nodes.clone(), j.fixed.clone(), members)?;
        let model = TrussModel::assemble(ground, j.young, j.rho, j.point_masses.clone())?;
        Self::new(model, j.v0, j.xmin)
    }

    /// `member,area` rows.
    pub fn design_csv(&self, x: &[f64]) -> String {
        let mut out = String::from("member,area\n");
        for (e, a) in x.iter().enumerate() {
            writeln!(out, "{e},{a:.16e}").expect("writing to String");
        }
        out
    }

    /// Members drawn with stroke width `∝ √area`; areas below `1.5·x_min`
    /// are omitted.
    pub fn design_svg(&self, x: &[f64]) -> String {
        let g = &self.model.ground;
        let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for &[px, py] in &g.nodes {
            x0 = x0.min(px);
            y0 = y0.min(py);
            x1 = x1.max(px);
            y1 = y1.max(py);
        }
        let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
        let unit = 400.0 / span;
        let pad = 30.0;
        let (w, h) = ((x1 - x0) * unit + 2.0 * pad, (y1 - y0) * unit + 2.0 * pad);
        let map = |p: [f64; 2]| (pad + (p[0] - x0) * unit, h - pad - (p[1] - y0) * unit);
        let threshold = 1.5 * self.set.x_min();
        let a_max = x.iter().copied().fold(0.0_f64, f64::max);
        let mut s = String::new();
        writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.1} {h:.1}">"#
        )
        .unwrap();
        writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
        for (e, &(a, b)) in g.members.iter().enumerate() {
            if x[e] < threshold || a_max <= 0.0 {
                continue;
            }
            let (ax, ay) = map(g.nodes[a]);
            let (bx, by) = map(g.nodes[b]);
            let width = 12.0 * (x[e] / a_max).sqrt();
            writeln!(
                s,
                r#"<line x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}" stroke="black" stroke-width="{width:.3}" stroke-linecap="round"><title>member {e}: {:.6e}</title></line>"#,
                x[e]
            )
            .unwrap();
        }
        for (i, &p) in g.nodes.iter().enumerate() {
            let (cx, cy) = map(p);
            if g.node_fixed(i) {
                writeln!(s, r#"<rect x="{:.2}" y="{:.2}" width="10" height="10" fill="gray"/>"#, cx - 5.0, cy - 5.0).unwrap();
            }
        }
        for pm in &self.model.masses {
            let (cx, cy) = map(g.nodes[pm.node]);
            writeln!(s, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="8" fill="steelblue"><title>{:e} kg</title></circle>"#, pm.mass).unwrap();
        }
        s.push_str("</svg>\n");
        s
    }
}

/// `{"nodes", "fixed", "members"?, "E", "rho", "point_masses", "V0", "xmin"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrussJson {
    pub nodes: Vec<[f64; 2]>,
    pub fixed: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<[usize; 2]>>,
    #[serde(rename = "E")]
    pub young: f64,
    pub rho: f64,
    #[serde(default)]
    pub point_masses: Vec<PointMass>,
    #[serde(rename = "V0")]
    pub v0: f64,
    pub xmin: f64,
}

/// Grid-based truss description used by the generator and the canonical instances.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub gx: usize,
    pub gy: usize,
    pub spacing: f64,
    pub supports: Supports,
    pub masses: Vec<((usize, usize), f64)>,
    pub young: f64,
    pub density: f64,
    pub volume: f64,
    pub x_min: f64,
}

impl GridSpec {
    pub fn build(&self) -> Result<TrussProblem> {
        let ground = GroundStructure::grid(self.gx, self.gy, self.spacing, &self.supports)?;
        let masses = self
            .masses
            .iter()
            .map(|&((i, j), mass)| {
                Ok(PointMass {
                    node: grid_node(self.gx, self.gy, i, j)?,
                    mass,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let model = TrussModel::assemble(ground, self.young, self.density, masses)?;
        TrussProblem::new(model, self.volume, self.x_min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    /// 3×3 grid, left edge supported, mass at the free corner: m = 28, n = 12.
    Desk,
    /// 3×3 grid, corners supported, mass at the centre: the fourfold
    /// symmetry forces a double top eigenvalue. m = 28, n = 10.
    DeskSymmetric,
    /// 5×5 grid with two supported nodes: m = 200, n = 46.
    Large,
}

impl Scale {
    pub fn spec(self) -> GridSpec {
        let (gx, gy, supports, mass_at) = match self {
            Scale::Desk => (3, 3, Supports::LeftEdge, (2, 0)),
            Scale::DeskSymmetric => (3, 3, Supports::Corners, (1, 1)),
            Scale::Large => (5, 5, Supports::Nodes(vec![(0, 0), (0, 4)]), (4, 2)),
        };
        GridSpec {
            gx,
            gy,
            spacing: 1.0,
            supports,
            masses: vec![(mass_at, DEFAULT_MASS)],
            young: STEEL_E,
            density: STEEL_RHO,
            volume: DEFAULT_V0,
            x_min: DEFAULT_XMIN,
        }
    }
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Scale::Desk),
            "desk-symmetric" => Ok(Scale::DeskSymmetric),
            "large" => Ok(Scale::Large),
            other => Err(Error::Parse(format!("unknown instance '{other}'"))),
        }
    }
}

pub fn canonical_instance(scale: Scale) -> TrussProblem {
    scale.spec().build().expect("canonical instances are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasible::ConvexSet;
    use crate::linalg::cholesky;

    fn bar(young: f64, rho: f64) -> TrussModel {
        // Node 0 pinned and node 1 on a roller: only u1x is free.
        let g = GroundStructure::new(vec![[0.0, 0.0], [1.0, 0.0]], vec![0, 1, 3], None).unwrap();
        TrussModel::assemble(g, young, rho, vec![]).unwrap()
    }

    #[test]
    fn member_counts() {
        let count = |gx, gy| {
            let nodes: Vec<[f64; 2]> = (0..gy)
                .flat_map(|j| (0..gx).map(move |i| [i as f64, j as f64]))
                .collect();
            ground_members(&nodes, 1e-9).len()
        };
        assert_eq!(count(2, 2), 6);
        assert_eq!(count(3, 1), 2);
        assert_eq!(count(3, 3), 28);
        assert_eq!(count(5, 5), 200);
    }

    #[test]
    fn collinear_pair_removed() {
        let m = ground_members(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]], 1e-9);
        assert_eq!(m, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn single_bar_closed_forms() {
        let full = GroundStructure::new(vec![[0.0, 0.0], [1.0, 0.0], [5.0, 5.0]], vec![0, 1, 4, 5], Some(vec![(0, 1)])).unwrap();
        let model = TrussModel::assemble(full, 1.0, 6.0, vec![]).unwrap();
        assert_eq!(model.stiffness[0].to_rows(), vec![vec![1.0, 0.0], vec![0.0, 0.0]]);
        assert_eq!(model.mass[0].to_rows(), vec![vec![2.0, 0.0], vec![0.0, 2.0]]);
        let b = bar(1.0, 6.0);
        assert_eq!(b.stiffness[0].to_rows(), vec![vec![1.0]]);
    }

    #[test]
    fn errors() {
        let nodes = vec![[0.0, 0.0], [1.0, 0.0]];
        assert_eq!(
            GroundStructure::new(nodes.clone(), vec![0, 1], None).unwrap_err(),
            Error::UnderConstrained { fixed: 2 }
        );
        assert!(matches!(
            GroundStructure::new(nodes.clone(), vec![0, 1, 9], None),
            Err(Error::DofOutOfRange { .. })
        ));
        let g = GroundStructure::new(nodes, vec![0, 1, 2], None).unwrap();
        assert!(matches!(
            TrussModel::assemble(g, 1.0, 1.0, vec![PointMass { node: 7, mass: 1.0 }]),
            Err(Error::DofOutOfRange { .. })
        ));
    }

    #[test]
    fn canonical_sizes() {
        let desk = canonical_instance(Scale::Desk);
        assert_eq!((desk.pencil.vars(), desk.pencil.order()), (28, 12));
        let sym = canonical_instance(Scale::DeskSymmetric);
        assert_eq!((sym.pencil.vars(), sym.pencil.order()), (28, 10));
        let large = canonical_instance(Scale::Large);
        assert_eq!((large.pencil.vars(), large.pencil.order()), (200, 46));
    }

    #[test]
    fn stiffness_definite_at_lower_bound() {
        let p = Scale::Desk.spec().build().unwrap();
        let x = vec![1e-8; p.pencil.vars()];
        assert!(cholesky(&p.model.stiffness_at(&x)).is_ok());
        let lam = p.pencil.lambda_max(&p.set.default_start()).unwrap();
        assert!(lam < 0.0);
    }

    #[test]
    fn json_round_trip() {
        let p = canonical_instance(Scale::Desk);
        let text = serde_json::to_string(&p.to_json()).unwrap();
        let back = TrussProblem::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.pencil, p.pencil);
        assert_eq!(back.set, p.set);
    }

    #[test]
    fn svg_omits_thin_members() {
        let p = canonical_instance(Scale::Desk);
        let mut x = vec![1e-8; p.pencil.vars()];
        x[0] = 1e-3;
        let svg = p.design_svg(&x);
        assert_eq!(svg.matches("<line").count(), 1);
        assert_eq!(p.design_csv(&x).lines().count(), 1 + x.len());
    }

    #[test]
    fn supports_parse() {
        assert_eq!("left".parse::<Supports>().unwrap(), Supports::LeftEdge);
        assert_eq!("0,0;2,1".parse::<Supports>().unwrap(), Supports::Nodes(vec![(0, 0), (2, 1)]));
        assert!("0;1".parse::<Supports>().is_err());
        let m = parse_grid_masses("2,0:1e7", 3, 3).unwrap();
        assert_eq!(m, vec![PointMass { node: 2, mass: 1e7 }]);
    }
}
