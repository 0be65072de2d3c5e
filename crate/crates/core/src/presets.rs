//! Fixture representations for the four once-punctured surface families and
//! the configuration checks reported for them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bqtree::{bq_test, vertex_at, Address, BqVerdict};
use crate::carrier::{
    axes_for_vertex, find_critical_carriers, minimal_of, AxesTriple, CarrierError, CarrierGraph,
};
use crate::charvar::{realize, CharVarError, RepresentationPair, TraceTriple};
use crate::fermat::{
    classify_triangle, fermat_point_triangle, FermatError, GeodesicTriple, Triangle, TriangleClass,
};
use crate::hyp3::{
    common_perpendicular_feet, cross_ratio, geodesic_distance, pi_rotation, ExtendedComplex,
    Geodesic, Hyp3Error,
};
use crate::tolerance::Tolerance;

const FIXTURES: &str = include_str!("../fixtures/presets.toml");

#[derive(Debug, Error)]
pub enum PresetError {
    #[error("unknown preset {0:?}; expected one of {1}")]
    Unknown(String, String),
    #[error("fixture file is malformed: {0}")]
    Fixture(String),
    #[error(transparent)]
    CharVar(#[from] CharVarError),
    #[error(transparent)]
    Geometry(#[from] Hyp3Error),
    #[error(transparent)]
    Carrier(#[from] CarrierError),
}

#[derive(Clone, Debug, Deserialize)]
struct FixtureFile {
    version: u32,
    preset: Vec<PresetFixture>,
}

/// One entry of the fixture file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresetFixture {
    pub name: String,
    pub family: String,
    pub note: String,
    #[serde(default)]
    pub traces: Option<[[f64; 2]; 3]>,
    #[serde(default)]
    pub axes: Option<[[[f64; 2]; 2]; 3]>,
}

pub fn fixtures() -> Result<Vec<PresetFixture>, PresetError> {
    let f: FixtureFile =
        toml::from_str(FIXTURES).map_err(|e| PresetError::Fixture(e.to_string()))?;
    if f.version != 1 {
        return Err(PresetError::Fixture(format!(
            "unsupported version {}",
            f.version
        )));
    }
    Ok(f.preset)
}

pub fn preset_names() -> Vec<String> {
    fixtures()
        .map(|f| f.into_iter().map(|p| p.name).collect())
        .unwrap_or_default()
}

fn complex(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl PresetFixture {
    pub fn representation(&self, tol: &Tolerance) -> Result<RepresentationPair, PresetError> {
        match (&self.traces, &self.axes) {
            (Some(t), None) => Ok(realize(&TraceTriple::from_array(t.map(complex)), tol)?),
            (None, Some(a)) => {
                let g = a
                    .iter()
                    .map(|e| {
                        Geodesic::new(
                            ExtendedComplex::Finite(complex(e[0])),
                            ExtendedComplex::Finite(complex(e[1])),
                        )
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(representation_from_axes(&[g[0], g[1], g[2]]))
            }
            _ => Err(PresetError::Fixture(format!(
                "preset {} needs exactly one of traces, axes",
                self.name
            ))),
        }
    }
}

/// Generators `ρX = r_Y r_Z` and `ρY = r_Z r_X` for prescribed rotation axes.
pub fn representation_from_axes(axes: &[Geodesic; 3]) -> RepresentationPair {
    let r = axes.map(|g| pi_rotation(&g));
    RepresentationPair {
        xi: r[1] * r[2],
        eta: r[2] * r[0],
    }
}

/// How three coplanar geodesics sit in their plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlanarConfiguration {
    /// No geodesic separates the other two.
    NonSeparating,
    /// The geodesic with this 0-based index separates the other two.
    Separating(usize),
}

/// Geometric checks on the axes of one superbasis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxesChecks {
    pub address: Address,
    /// All three axes meet one plane orthogonally.
    pub orthogonal_to_common_plane: bool,
    /// All three axes lie in one plane.
    pub coplanar: bool,
    pub in_reference_plane: [bool; 3],
    pub orthogonal_to_reference_plane: [bool; 3],
    pub configuration: Option<PlanarConfiguration>,
    /// Whether each translation axis misses the rotation axis of the same slot.
    pub delta_gamma_disjoint: [bool; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresetReport {
    pub name: String,
    pub family: String,
    /// Provenance of the fixture numbers.
    pub fixture_note: String,
    pub traces: TraceTriple,
    pub verdict: BqVerdict,
    pub root: AxesChecks,
    /// Checks at the superbasis of the first minimal carrier.
    pub winning: AxesChecks,
    pub minimal_carriers: Vec<CarrierGraph>,
    pub critical_count: usize,
    /// Superbases within `acute_search_depth` whose axes meet a common plane in a
    /// triangle with every angle below 2π/3, with the Fermat value of that triangle.
    pub acute_superbases: Vec<(Address, f64)>,
    pub acute_search_depth: usize,
}

const PLANE_TOL: f64 = 1e-7;

fn on_reference_plane(u: &ExtendedComplex) -> bool {
    match u {
        ExtendedComplex::Infinity => true,
        ExtendedComplex::Finite(z) => z.im.abs() <= PLANE_TOL * z.norm().max(1.0),
    }
}

fn crosses_reference_plane(g: &Geodesic) -> bool {
    match (g.start, g.end) {
        (ExtendedComplex::Finite(a), ExtendedComplex::Finite(b)) => {
            a.im.abs() > PLANE_TOL && (b - a.conj()).norm() <= PLANE_TOL * a.norm().max(1.0)
        }
        _ => false,
    }
}

/// Whether one coplanar geodesic separates the other two, read from the sign
/// of the cross-ratio of its endpoints against one endpoint of each of the others.
fn configuration(g: &[Geodesic; 3]) -> Result<PlanarConfiguration, Hyp3Error> {
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let cr = cross_ratio(&g[i].start, &g[i].end, &g[j].start, &g[k].start)?;
        if cr.re < 0.0 {
            return Ok(PlanarConfiguration::Separating(i));
        }
    }
    Ok(PlanarConfiguration::NonSeparating)
}

fn axes_checks(axes: &AxesTriple, tol: &Tolerance) -> Result<AxesChecks, PresetError> {
    let g = axes.axes.geodesics();
    let hex = axes.axes.hexagon();
    let coplanar = hex
        .side_lengths
        .iter()
        .all(|l| l.angle.sin().abs() <= PLANE_TOL);
    let delta_gamma_disjoint = std::array::from_fn(|k| {
        geodesic_distance(&axes.delta_axes[k], &g[k], tol).is_ok_and(|d| d > tol.degenerate)
    });
    Ok(AxesChecks {
        address: axes.vertex.address.clone(),
        orthogonal_to_common_plane: axes.axes.is_triangle_case(),
        coplanar,
        in_reference_plane: g.map(|x| on_reference_plane(&x.start) && on_reference_plane(&x.end)),
        orthogonal_to_reference_plane: g.map(|x| crosses_reference_plane(&x)),
        configuration: if coplanar {
            Some(configuration(g)?)
        } else {
            None
        },
        delta_gamma_disjoint,
    })
}

/// The triangle cut out on the common orthogonal plane, when there is one.
fn plane_triangle(triple: &GeodesicTriple, tol: &Tolerance) -> Option<Triangle> {
    if !triple.is_triangle_case() {
        return None;
    }
    let g = triple.geodesics();
    let feet: Vec<_> = (0..3)
        .filter_map(|i| common_perpendicular_feet(&g[i], &g[(i + 1) % 3], tol).ok())
        .collect();
    if feet.len() != 3 {
        return None;
    }
    Triangle::new(feet[0].0, feet[1].0, feet[2].0).ok()
}

fn acute_superbases(
    rep: &RepresentationPair,
    depth: usize,
    tol: &Tolerance,
) -> Result<Vec<(Address, f64)>, PresetError> {
    let t = rep.traces();
    let mut out = Vec::new();
    let mut layer = vec![Address::root()];
    for d in 0..=depth {
        let mut next = Vec::new();
        for a in &layer {
            let v = vertex_at(&t, a);
            match axes_for_vertex(rep, &v, tol) {
                Ok(ax) => {
                    if let Some(tri) = plane_triangle(&ax.axes, tol) {
                        if classify_triangle(&tri) == TriangleClass::Acute2pi3 {
                            out.push((a.clone(), fermat_point_triangle(&tri).value));
                        }
                    }
                }
                Err(CarrierError::Fermat(FermatError::GenericityViolation(_))) => {}
                Err(e) => return Err(e.into()),
            }
            if d < depth {
                next.extend(
                    crate::charvar::Slot::ALL
                        .iter()
                        .filter(|&&s| a.parent_slot() != Some(s))
                        .map(|&s| a.step(s)),
                );
            }
        }
        layer = next;
    }
    Ok(out)
}

pub fn run_preset(
    name: &str,
    depth_cap: usize,
    tol: &Tolerance,
) -> Result<PresetReport, PresetError> {
    let all = fixtures()?;
    let Some(fixture) = all.iter().find(|p| p.name == name) else {
        let names: Vec<_> = all.iter().map(|p| p.name.as_str()).collect();
        return Err(PresetError::Unknown(name.to_string(), names.join(", ")));
    };
    let rep = fixture.representation(tol)?;
    let t = rep.traces();
    let verdict = bq_test(&t, depth_cap, tol);
    let critical = find_critical_carriers(&rep, depth_cap, tol)?;
    let critical_count = critical.len();
    let minimal = minimal_of(critical, tol);
    let root = axes_checks(
        &axes_for_vertex(&rep, &vertex_at(&t, &Address::root()), tol)?,
        tol,
    )?;
    let win_addr = minimal
        .first()
        .map(|g| g.vertex_address.clone())
        .unwrap_or_default();
    let winning = axes_checks(&axes_for_vertex(&rep, &vertex_at(&t, &win_addr), tol)?, tol)?;
    let acute_search_depth = 6;
    let acute = if root.orthogonal_to_common_plane {
        acute_superbases(&rep, acute_search_depth, tol)?
    } else {
        Vec::new()
    };
    Ok(PresetReport {
        name: fixture.name.clone(),
        family: fixture.family.clone(),
        fixture_note: fixture.note.clone(),
        traces: t,
        verdict,
        root,
        winning,
        minimal_carriers: minimal,
        critical_count,
        acute_superbases: acute,
        acute_search_depth,
    })
}
