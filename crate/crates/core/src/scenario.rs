//! Yield and transmittance calculators for concrete deployments: free-space
//! ground–satellite links, satellite relay networks and an airport network.

use std::collections::BTreeSet;
use std::path::Path;

use serde::Deserialize;

use crate::error::ScenarioError;
use crate::netgraph::{
    critical_parameters, link_sparsity, rank_critical, total_connection_strength, Network, NodeReport,
    StrategyKind,
};
use crate::qstate::{depol_yield, thermal_yield, DepolYieldMode};

pub const EARTH_RADIUS_KM: f64 = 6371.0;

fn unit(name: &'static str, value: f64) -> Result<(), ScenarioError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(ScenarioError::OutOfRange {
            name,
            value,
            range: "[0, 1]",
        })
    }
}

fn nonneg(name: &'static str, value: f64) -> Result<(), ScenarioError> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(ScenarioError::OutOfRange {
            name,
            value,
            range: "[0, inf)",
        })
    }
}

/// Free-space link between a satellite and a ground telescope. Lengths in
/// metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtmosphereParams {
    /// Beam waist.
    pub omega0: f64,
    /// Rayleigh range.
    pub z_r: f64,
    /// Link distance.
    pub z: f64,
    /// Telescope aperture radius.
    pub r: f64,
    /// Rytov parameter; squared in the turbulence term.
    pub sigma_r: f64,
    /// Fresnel ratio at the receiver.
    pub fresnel: f64,
    pub xi_t: f64,
    pub xi_r: f64,
    pub xi_as: f64,
    /// Pointing jitter as a fraction of the turbulent spot radius.
    pub eta: f64,
}

impl Default for AtmosphereParams {
    /// 780 nm source with unit quality factor.
    fn default() -> Self {
        AtmosphereParams {
            omega0: 0.0021,
            z_r: 17.8,
            z: 0.0,
            r: 0.1,
            sigma_r: 0.1,
            fresnel: 0.1,
            xi_t: 0.99,
            xi_r: 0.99,
            xi_as: 0.5,
            eta: 0.95,
        }
    }
}

impl AtmosphereParams {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        for (name, v) in [
            ("omega0", self.omega0),
            ("z_r", self.z_r),
        ] {
            if !(v > 0.0) {
                return Err(ScenarioError::OutOfRange {
                    name,
                    value: v,
                    range: "(0, inf)",
                });
            }
        }
        nonneg("z", self.z)?;
        nonneg("r", self.r)?;
        nonneg("sigma_r", self.sigma_r)?;
        nonneg("fresnel", self.fresnel)?;
        nonneg("eta", self.eta)?;
        unit("xi_t", self.xi_t)?;
        unit("xi_r", self.xi_r)?;
        unit("xi_as", self.xi_as)
    }

    /// Product of pointing and efficiency factors, the large-aperture limit.
    pub fn plateau(&self) -> f64 {
        let e2 = self.eta * self.eta;
        e2 / (e2 + 0.25) * self.xi_as * self.xi_r * self.xi_t
    }
}

/// Total transmittance: pointing and efficiencies times the diffraction and
/// turbulence capture fractions.
pub fn atmospheric_transmittance(p: &AtmosphereParams) -> Result<f64, ScenarioError> {
    p.validate()?;
    let w2 = p.omega0 * p.omega0;
    let r2 = p.r * p.r;
    let zr2 = p.z_r * p.z_r;
    let z2 = p.z * p.z;
    let diffraction = -(-2.0 * r2 * zr2 / (w2 * (z2 + zr2))).exp_m1();
    let broadening = 1.0 + 1.33 * p.fresnel.powf(5.0 / 6.0) * p.sigma_r * p.sigma_r;
    let turbulence = -(-2.0 * r2 / (w2 * broadening * (z2 / zr2 + 1.0))).exp_m1();
    Ok(p.plateau() * diffraction * turbulence)
}

/// Which form of the satellite-network yield to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum YieldVariant {
    /// Exponents `n − 1` on erasure, source and Bell factors.
    #[default]
    Derivation,
    /// `(η_e²)^n` and no Bell factor, as in the summary of results.
    SummaryCompat,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatelliteYieldParams {
    /// Satellite-to-satellite links, at least 1.
    pub n: u32,
    pub eta_e: f64,
    pub eta_s: f64,
    pub q: f64,
    /// Memory depolarising parameter.
    pub p: f64,
    /// Memory steps.
    pub s: u32,
    /// Fibre loss (1/km).
    pub alpha: f64,
    pub l_b: f64,
    pub l_m: f64,
    pub eta_g: f64,
    pub kappa_g: f64,
    /// Stored states at or below this fidelity are discarded.
    pub eta_crit: f64,
    pub variant: YieldVariant,
}

impl Default for SatelliteYieldParams {
    fn default() -> Self {
        SatelliteYieldParams {
            n: 2,
            eta_e: 0.95,
            eta_s: 0.9,
            q: 1.0,
            p: 0.1,
            s: 1,
            alpha: 1.0 / 22.0,
            l_b: 10.0,
            l_m: 10.0,
            eta_g: 0.5,
            kappa_g: 0.5,
            eta_crit: 0.0,
            variant: YieldVariant::Derivation,
        }
    }
}

impl SatelliteYieldParams {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.n == 0 {
            return Err(ScenarioError::OutOfRange {
                name: "n",
                value: 0.0,
                range: "[1, inf)",
            });
        }
        unit("eta_e", self.eta_e)?;
        unit("eta_s", self.eta_s)?;
        unit("q", self.q)?;
        if !(0.0..=4.0 / 3.0).contains(&self.p) {
            return Err(ScenarioError::OutOfRange {
                name: "p",
                value: self.p,
                range: "[0, 4/3]",
            });
        }
        nonneg("alpha", self.alpha)?;
        nonneg("l_b", self.l_b)?;
        nonneg("l_m", self.l_m)?;
        unit("eta_g", self.eta_g)?;
        unit("kappa_g", self.kappa_g)?;
        unit("eta_crit", self.eta_crit)
    }

    pub fn fiber_factor(&self) -> f64 {
        (-self.alpha * (self.l_b + self.l_m)).exp()
    }

    pub fn memory_factor(&self) -> f64 {
        depol_yield(self.p, self.s, DepolYieldMode::PaperFormula)
    }
}

/// Average entanglement yield between two ground stations linked by `n`
/// satellite hops. Zero when the memory fidelity is not above `η_crit`.
pub fn satellite_yield(p: &SatelliteYieldParams) -> Result<f64, ScenarioError> {
    p.validate()?;
    let memory = p.memory_factor();
    if memory <= p.eta_crit {
        return Ok(0.0);
    }
    let k = p.n as i32 - 1;
    let thermal = thermal_yield(p.eta_g, p.kappa_g);
    let e2 = p.eta_e * p.eta_e;
    let links = match p.variant {
        YieldVariant::Derivation => e2.powi(k) * p.q.powi(k),
        YieldVariant::SummaryCompat => e2.powi(p.n as i32),
    };
    Ok(p.fiber_factor() * links * p.eta_s.powi(k) * memory * thermal)
}

/// `η_t (η_e²)^{n−1} q^{n−1}`: no memory, source or fibre losses.
pub fn simple_satellite_yield(n: u32, eta_e: f64, q: f64, eta_g: f64, kappa_g: f64) -> Result<f64, ScenarioError> {
    if n == 0 {
        return Err(ScenarioError::OutOfRange {
            name: "n",
            value: 0.0,
            range: "[1, inf)",
        });
    }
    unit("eta_e", eta_e)?;
    unit("q", q)?;
    unit("eta_g", eta_g)?;
    unit("kappa_g", kappa_g)?;
    let k = n as i32 - 1;
    Ok(thermal_yield(eta_g, kappa_g) * (eta_e * eta_e).powi(k) * q.powi(k))
}

/// Yield between two airports `L` km apart over satellite nodes spaced `L₀`
/// km: `q^{n−1} (η_e²)^{n−1} η_t` with `n = ⌊L/L₀⌋`.
pub fn airport_yield(
    length_km: f64,
    spacing_km: f64,
    q: f64,
    eta_e: f64,
    eta_g: f64,
    kappa_g: f64,
) -> Result<f64, ScenarioError> {
    if !(spacing_km > 0.0) {
        return Err(ScenarioError::OutOfRange {
            name: "L0",
            value: spacing_km,
            range: "(0, inf)",
        });
    }
    if !(length_km >= spacing_km) {
        return Err(ScenarioError::OutOfRange {
            name: "L",
            value: length_km,
            range: "[L0, inf)",
        });
    }
    let n = (length_km / spacing_km).floor() as u32;
    simple_satellite_yield(n, eta_e, q, eta_g, kappa_g)
}

/// Haversine distance on a sphere of radius 6371 km.
pub fn great_circle_km(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> Result<f64, ScenarioError> {
    for (name, v, lim) in [
        ("lat1", lat1, 90.0),
        ("lat2", lat2, 90.0),
        ("lon1", lon1, 180.0),
        ("lon2", lon2, 180.0),
    ] {
        if !(v.abs() <= lim) {
            return Err(ScenarioError::OutOfRange {
                name,
                value: v,
                range: if lim == 90.0 { "[-90, 90]" } else { "[-180, 180]" },
            });
        }
    }
    let (p1, p2) = (lat1.to_radians(), lat2.to_radians());
    let dphi = p2 - p1;
    let dl = (lon2 - lon1).to_radians();
    let h = (dphi / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    Ok(2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin())
}

/// Edge probability for a route of `km`: `e^{−L/22}` below 50 km, else 0.8.
pub fn airport_edge_probability(km: f64) -> f64 {
    if km < 50.0 {
        (-km / 22.0).exp()
    } else {
        0.8
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct AirportRecord {
    pub id: String,
    pub name: String,
    pub lat: f64,
    pub lon: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct RouteRecord {
    pub src_id: String,
    pub dst_id: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AirportDataset {
    pub airports: Vec<AirportRecord>,
    pub routes: Vec<RouteRecord>,
}

fn read_csv<T: for<'de> Deserialize<'de>>(text: &str, file: &str) -> Result<Vec<T>, ScenarioError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in rdr.deserialize().enumerate() {
        out.push(rec.map_err(|e| ScenarioError::Parse {
            file: file.to_string(),
            // header is line 1
            line: i + 2,
            msg: e.to_string(),
        })?);
    }
    Ok(out)
}

impl AirportDataset {
    pub fn parse(airports_csv: &str, routes_csv: &str) -> Result<Self, ScenarioError> {
        Ok(AirportDataset {
            airports: read_csv(airports_csv, "airports.csv")?,
            routes: read_csv(routes_csv, "routes.csv")?,
        })
    }

    /// Reads `airports.csv` and `routes.csv` from `dir`.
    pub fn load(dir: &Path) -> Result<Self, ScenarioError> {
        let read = |name: &str| {
            std::fs::read_to_string(dir.join(name))
                .map_err(|e| ScenarioError::Io(format!("{}: {e}", dir.join(name).display())))
        };
        Self::parse(&read("airports.csv")?, &read("routes.csv")?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AirportNetwork {
    pub network: Network,
    /// Routes dropped because an endpoint is unknown.
    pub skipped_routes: usize,
}

fn id_key(id: &str) -> (u8, i64, String) {
    match id.parse::<i64>() {
        Ok(v) => (0, v, String::new()),
        Err(_) => (1, 0, id.to_string()),
    }
}

/// Airports become nodes (ordered by id, numeric ids numerically) and routes
/// undirected edges; self-routes and duplicates collapse.
pub fn load_airport_network(data: &AirportDataset) -> Result<AirportNetwork, ScenarioError> {
    let mut airports: Vec<&AirportRecord> = data.airports.iter().collect();
    airports.sort_by_key(|a| id_key(&a.id));
    let mut g = Network::new();
    for a in &airports {
        great_circle_km(a.lat, a.lon, 0.0, 0.0)?;
        let i = g.add_node(&a.id)?;
        g.set_coords(i, a.lat, a.lon);
    }
    let mut pairs = BTreeSet::new();
    let mut skipped = 0;
    for r in &data.routes {
        match (g.idx(&r.src_id), g.idx(&r.dst_id)) {
            (Ok(i), Ok(j)) if i != j => {
                pairs.insert((i.min(j), i.max(j)));
            }
            (Ok(_), Ok(_)) => {}
            _ => skipped += 1,
        }
    }
    for (i, j) in pairs {
        let (la, lo) = g.coords(i).expect("coordinates set");
        let (lb, lo2) = g.coords(j).expect("coordinates set");
        let km = great_circle_km(la, lo, lb, lo2)?;
        g.add_edge_idx(i, j, airport_edge_probability(km))?;
    }
    Ok(AirportNetwork {
        network: g,
        skipped_routes: skipped,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AirportReport {
    pub nodes: usize,
    pub edges: usize,
    pub longest_route_km: f64,
    pub longest_pair: Option<(String, String)>,
    pub mean_route_km: f64,
    /// Non-cooperative.
    pub link_sparsity: f64,
    /// Non-cooperative, without self terms.
    pub total_connection_strength: f64,
    pub top_critical: Vec<NodeReport>,
}

/// Route statistics plus the `top` most critical airports.
pub fn airport_report(g: &Network, p_star: f64, top: usize) -> Result<AirportReport, ScenarioError> {
    let mut longest = 0.0;
    let mut pair = None;
    let mut sum = 0.0;
    let edges = g.edges();
    for &(i, j, _) in &edges {
        let (Some((a, b)), Some((c, d))) = (g.coords(i), g.coords(j)) else {
            continue;
        };
        let km = great_circle_km(a, b, c, d)?;
        sum += km;
        if km > longest {
            longest = km;
            pair = Some((g.id(i).to_string(), g.id(j).to_string()));
        }
    }
    let ranked = rank_critical(&critical_parameters(g, p_star)?);
    Ok(AirportReport {
        nodes: g.node_count(),
        edges: edges.len(),
        longest_route_km: longest,
        longest_pair: pair,
        mean_route_km: if edges.is_empty() { 0.0 } else { sum / edges.len() as f64 },
        link_sparsity: link_sparsity(g, p_star, StrategyKind::NonCooperative)?,
        total_connection_strength: total_connection_strength(g, StrategyKind::NonCooperative, p_star)?,
        top_critical: ranked.into_iter().take(top).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn transmittance() {
        let big = AtmosphereParams {
            r: 10.0,
            ..Default::default()
        };
        close(atmospheric_transmittance(&big).unwrap(), 0.3837485, 1e-6);
        let zero = AtmosphereParams {
            r: 0.0,
            ..Default::default()
        };
        assert_eq!(atmospheric_transmittance(&zero).unwrap(), 0.0);
        let d = AtmosphereParams::default();
        close(atmospheric_transmittance(&d).unwrap(), d.plateau(), 1e-9);
        let bad = AtmosphereParams {
            xi_t: 1.5,
            ..Default::default()
        };
        assert!(atmospheric_transmittance(&bad).is_err());
    }

    #[test]
    fn satellite() {
        let ideal = SatelliteYieldParams {
            n: 3,
            eta_e: 1.0,
            eta_s: 1.0,
            q: 1.0,
            p: 0.0,
            s: 2,
            alpha: 0.0,
            l_b: 0.0,
            l_m: 0.0,
            eta_g: 1.0,
            kappa_g: 0.3,
            eta_crit: 0.0,
            variant: YieldVariant::Derivation,
        };
        assert_eq!(satellite_yield(&ideal).unwrap(), 1.0);
        close(satellite_yield(&SatelliteYieldParams::default()).unwrap(), 0.15785, 1e-5);
        let strict = SatelliteYieldParams {
            eta_crit: 0.8575,
            ..Default::default()
        };
        assert_eq!(satellite_yield(&strict).unwrap(), 0.0);
        close(simple_satellite_yield(4, 0.95, 1.0, 0.5, 0.5).unwrap(), 0.4134892, 1e-6);
        let compat = SatelliteYieldParams {
            variant: YieldVariant::SummaryCompat,
            q: 0.5,
            ..Default::default()
        };
        let base = satellite_yield(&SatelliteYieldParams::default()).unwrap();
        close(satellite_yield(&compat).unwrap(), base * 0.9025, 1e-12);
    }

    #[test]
    fn airports() {
        close(airport_yield(4000.0, 1000.0, 1.0, 0.95, 0.5, 0.5).unwrap(), 0.4134892, 1e-6);
        close(airport_yield(1000.0, 1000.0, 0.3, 0.95, 0.5, 0.5).unwrap(), 0.5625, 1e-12);
        close(airport_yield(4000.0, 1000.0, 0.9, 0.95, 0.5, 0.5).unwrap(), 0.3014336, 1e-6);
        assert!(airport_yield(500.0, 1000.0, 1.0, 0.95, 0.5, 0.5).is_err());
    }

    #[test]
    fn distances() {
        assert_eq!(great_circle_km(10.0, 20.0, 10.0, 20.0).unwrap(), 0.0);
        close(great_circle_km(0.0, 0.0, 0.0, 180.0).unwrap(), std::f64::consts::PI * 6371.0, 1e-6);
        close(great_circle_km(0.0, 0.0, 0.0, 90.0).unwrap(), 10007.543, 1e-3);
        assert!(great_circle_km(91.0, 0.0, 0.0, 0.0).is_err());
        close(airport_edge_probability(22.0), (-1f64).exp(), 1e-15);
        assert_eq!(airport_edge_probability(5000.0), 0.8);
    }

    #[test]
    fn dataset_parsing() {
        let a = "id,name,lat,lon\n1,A,0,0\n2,B,0,1\n3,C,0,0.1\n";
        let r = "src_id,dst_id\n1,2\n2,1\n1,3\n3,9\n2,2\n";
        let d = AirportDataset::parse(a, r).unwrap();
        let net = load_airport_network(&d).unwrap();
        assert_eq!(net.network.edge_count(), 2);
        assert_eq!(net.skipped_routes, 1);
        let rep = airport_report(&net.network, 0.1, 3).unwrap();
        assert_eq!(rep.longest_pair, Some(("1".into(), "2".into())));
        close(rep.longest_route_km, 111.195, 1e-3);
        let bad = AirportDataset::parse("id,name,lat,lon\n1,A,x,0\n", "src_id,dst_id\n");
        assert!(matches!(bad, Err(ScenarioError::Parse { line: 2, .. })));
    }
}
