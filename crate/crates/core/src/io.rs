//! JSON file formats: instances with their sample points, colorings,
//! conditions and locations. Rationals are `"p/q"` strings throughout.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::coloring::BoxColoring;
use crate::error::{Error, Result};
use crate::hamming;
use crate::kernel::rational::{format_rational, parse_rational};
use crate::kernel::{Adjacency, GraphInstance, Point, Polynomial, SampleUniverse, TaggedBox};
use crate::poset::{Location, PCondition, QCondition};

/// On-disk form of an instance plus its sample points.
///
/// `points` may be omitted for explicit graphs (all vertices) and for
/// Hamming kinds (the whole truncation).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub squared_distances: Option<Vec<String>>,
    /// Terms `[c, i, j]` of `Σ c u^i v^j`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<Vec<(String, u32, u32)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(usize, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<String>>>,
}

fn from_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        Error::parse(
            format!("{what}, line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

fn required<T>(field: Option<T>, name: &str) -> Result<T> {
    field.ok_or_else(|| Error::parse(name, "missing field"))
}

fn parse_point(coords: &[String], field: &str) -> Result<Point> {
    coords
        .iter()
        .enumerate()
        .map(|(k, s)| parse_rational(s).map_err(|e| relocate(e, format!("{field}[{k}]"))))
        .collect::<Result<Vec<_>>>()
        .map(Point::new)
}

fn relocate(e: Error, location: String) -> Error {
    match e {
        Error::Parse { message, .. } => Error::Parse { location, message },
        other => Error::parse(location, other.to_string()),
    }
}

fn parse_points(rows: &[Vec<String>], field: &str, dim: usize) -> Result<Vec<Point>> {
    let mut seen = BTreeMap::new();
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let loc = format!("{field}[{i}]");
        if row.len() != dim {
            return Err(Error::parse(
                loc,
                format!("expected {dim} coordinates, found {}", row.len()),
            ));
        }
        let p = parse_point(row, &loc)?;
        if let Some(j) = seen.insert(p.clone(), i) {
            return Err(Error::parse(loc, format!("duplicate of {field}[{j}]")));
        }
        out.push(p);
    }
    Ok(out)
}

impl InstanceFile {
    pub fn into_universe(self) -> Result<SampleUniverse> {
        let kind = self.kind.as_str();
        let instance = match kind {
            "distance" => {
                let dim = required(self.dim, "dim")?;
                let squared = required(self.squared_distances.as_ref(), "squared_distances")?
                    .iter()
                    .enumerate()
                    .map(|(i, s)| parse_rational(s).map_err(|e| relocate(e, format!("squared_distances[{i}]"))))
                    .collect::<Result<Vec<_>>>()?;
                GraphInstance::distance(dim, squared)
            }
            "curveDifference" => {
                let terms = required(self.polynomial.as_ref(), "polynomial")?
                    .iter()
                    .enumerate()
                    .map(|(i, (c, a, b))| {
                        parse_rational(c)
                            .map(|c| (c, *a, *b))
                            .map_err(|e| relocate(e, format!("polynomial[{i}]")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if self.dim.is_some_and(|d| d != 2) {
                    return Err(Error::parse("dim", "curve instances are planar"));
                }
                Ok(GraphInstance::curve(Polynomial::new(terms)))
            }
            "hammingUniform" => {
                GraphInstance::hamming_uniform(required(self.dim, "dim")?, required(self.alphabet, "alphabet")?)
            }
            "hammingDiagonal" => GraphInstance::hamming_diagonal(required(self.dim, "dim")?),
            "explicit" => {
                let rows = required(self.vertices.as_ref(), "vertices")?;
                let dim = rows.first().map_or(0, Vec::len);
                let vertices = parse_points(rows, "vertices", dim)?;
                GraphInstance::explicit(vertices, required(self.edges.as_deref(), "edges")?)
            }
            other => return Err(Error::parse("kind", format!("unknown kind \"{other}\""))),
        }
        .map_err(|e| relocate(e, "instance".into()))?;

        let dim = instance.dim();
        let points = match (&self.points, kind) {
            (Some(rows), _) => parse_points(rows, "points", dim)?,
            (None, "explicit") => return SampleUniverse::of_explicit(instance),
            (None, "hammingDiagonal") => return hamming::make_diagonal_hamming(dim, hamming::DEFAULT_SIZE_BOUND),
            (None, "hammingUniform") => {
                return hamming::make_uniform_hamming(dim, self.alphabet.unwrap_or(1), hamming::DEFAULT_SIZE_BOUND)
            }
            (None, _) => return Err(Error::parse("points", "missing field")),
        };
        SampleUniverse::new(instance, points).map_err(|e| match e {
            Error::InvalidPoint(msg) => Error::parse("points", msg),
            other => other,
        })
    }

    pub fn from_universe(universe: &SampleUniverse) -> Self {
        let instance = universe.instance();
        let rows = |pts: &[Point]| -> Vec<Vec<String>> {
            pts.iter()
                .map(|p| p.coords().iter().map(format_rational).collect())
                .collect()
        };
        let mut file = InstanceFile {
            kind: instance.kind().name().to_string(),
            dim: Some(instance.dim()),
            points: Some(rows(universe.points())),
            ..Default::default()
        };
        match instance.adjacency() {
            Adjacency::Distance { squared } => {
                file.squared_distances = Some(squared.iter().map(format_rational).collect());
            }
            Adjacency::Curve { poly } => {
                file.polynomial = Some(
                    poly.terms
                        .iter()
                        .map(|(c, i, j)| (format_rational(c), *i, *j))
                        .collect(),
                );
            }
            Adjacency::HammingUniform { alphabet } => file.alphabet = Some(*alphabet),
            Adjacency::HammingDiagonal => {}
            Adjacency::Explicit { vertices, edges, .. } => {
                file.vertices = Some(rows(vertices));
                file.edges = Some(edges.iter().copied().collect());
            }
        }
        file
    }
}

pub fn parse_instance(text: &str) -> Result<SampleUniverse> {
    from_json::<InstanceFile>(text, "instance")?.into_universe()
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<SampleUniverse> {
    parse_instance(&read(path)?)
}

pub fn instance_to_json(universe: &SampleUniverse) -> String {
    to_json(&InstanceFile::from_universe(universe))
}

pub fn read(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn parse_coloring(universe: &SampleUniverse, text: &str) -> Result<BoxColoring> {
    let c: BoxColoring = from_json(text, "coloring")?;
    check_indices(universe, c.assignment.keys())?;
    Ok(c)
}

pub fn parse_p_condition(universe: &SampleUniverse, text: &str) -> Result<PCondition> {
    let map: BTreeMap<usize, TaggedBox> = from_json(text, "condition")?;
    check_indices(universe, map.keys())?;
    PCondition::new(universe, map)
}

pub fn parse_q_condition(universe: &SampleUniverse, text: &str) -> Result<QCondition> {
    let map: BTreeMap<usize, u64> = from_json(text, "condition")?;
    check_indices(universe, map.keys())?;
    QCondition::new(universe, map)
}

/// A JSON array of conditions.
pub fn parse_q_conditions(universe: &SampleUniverse, text: &str) -> Result<Vec<QCondition>> {
    let maps: Vec<BTreeMap<usize, u64>> = from_json(text, "conditions")?;
    maps.into_iter()
        .enumerate()
        .map(|(i, m)| {
            check_indices(universe, m.keys())
                .and_then(|_| QCondition::new(universe, m))
                .map_err(|e| relocate(e, format!("conditions[{i}]")))
        })
        .collect()
}

pub fn parse_p_conditions(universe: &SampleUniverse, text: &str) -> Result<Vec<PCondition>> {
    let maps: Vec<BTreeMap<usize, TaggedBox>> = from_json(text, "conditions")?;
    maps.into_iter()
        .enumerate()
        .map(|(i, m)| {
            check_indices(universe, m.keys())
                .and_then(|_| PCondition::new(universe, m))
                .map_err(|e| relocate(e, format!("conditions[{i}]")))
        })
        .collect()
}

pub fn parse_location(universe: &SampleUniverse, text: &str) -> Result<Location> {
    let raw: Location = from_json(text, "location")?;
    Location::new(universe, raw.boxes().to_vec(), raw.colors().to_vec())
}

fn check_indices<'a>(universe: &SampleUniverse, keys: impl Iterator<Item = &'a usize>) -> Result<()> {
    for &k in keys {
        if k >= universe.len() {
            return Err(Error::parse(
                format!("key {k}"),
                format!("index outside a universe of {} points", universe.len()),
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::rat;

    const LINE: &str =
        r#"{"kind": "distance", "dim": 1, "squared_distances": ["1", "1/4"], "points": [["0"], ["1/2"], ["1"]]}"#;

    #[test]
    fn distance_round_trip() {
        let u = parse_instance(LINE).unwrap();
        assert_eq!(u.len(), 3);
        assert!(u.adjacent(0, 1) && u.adjacent(0, 2));
        match u.instance().adjacency() {
            Adjacency::Distance { squared } => assert_eq!(squared, &vec![rat(1, 4), rat(1, 1)]),
            _ => panic!("wrong kind"),
        }
        let again = parse_instance(&instance_to_json(&u)).unwrap();
        assert_eq!(again.points(), u.points());
        assert_eq!(instance_to_json(&again), instance_to_json(&u));
    }

    #[test]
    fn other_kinds() {
        let curve = r#"{"kind": "curveDifference", "polynomial": [["1", 0, 1], ["-1", 2, 0]], "points": [["0", "0"], ["1", "1"]]}"#;
        assert!(parse_instance(curve).unwrap().adjacent(0, 1));
        let diag = parse_instance(r#"{"kind": "hammingDiagonal", "dim": 3}"#).unwrap();
        assert_eq!(diag.len(), 6);
        let explicit = r#"{"kind": "explicit", "vertices": [["0"], ["1"], ["2"]], "edges": [[0, 2]]}"#;
        let u = parse_instance(explicit).unwrap();
        assert!(u.adjacent(0, 2) && !u.adjacent(0, 1));
        assert_eq!(parse_instance(&instance_to_json(&u)).unwrap().edge_count(), 1);
    }

    fn location_of(e: Error) -> String {
        match e {
            Error::Parse { location, .. } => location,
            other => panic!("expected a parse error, got {other}"),
        }
    }

    #[test]
    fn parse_errors_name_the_field() {
        let dup = r#"{"kind": "distance", "dim": 1, "squared_distances": ["1"], "points": [["0"], ["1"], ["0"]]}"#;
        assert_eq!(location_of(parse_instance(dup).unwrap_err()), "points[2]");
        let zero = r#"{"kind": "distance", "dim": 1, "squared_distances": ["3/0"], "points": []}"#;
        assert_eq!(location_of(parse_instance(zero).unwrap_err()), "squared_distances[0]");
        let mismatch = r#"{"kind": "distance", "dim": 2, "squared_distances": ["1"], "points": [["0"]]}"#;
        assert_eq!(location_of(parse_instance(mismatch).unwrap_err()), "points[0]");
        assert!(location_of(parse_instance("{\"kind\": \n 3}").unwrap_err()).contains("line 2"));
        assert_eq!(location_of(parse_instance(r#"{"kind": "torus"}"#).unwrap_err()), "kind");
    }

    #[test]
    fn condition_files() {
        let u = parse_instance(LINE).unwrap();
        let q = parse_q_condition(&u, r#"{"0": 0, "2": 1}"#).unwrap();
        assert_eq!(q.get(2), Some(1));
        assert!(parse_q_condition(&u, r#"{"0": 0, "1": 0}"#).is_err());
        assert!(matches!(parse_q_condition(&u, r#"{"7": 0}"#), Err(Error::Parse { .. })));
        let qs = parse_q_conditions(&u, r#"[{"0": 0}, {"1": 1}]"#).unwrap();
        assert_eq!(qs.len(), 2);

        // the three points form a triangle, so only the full domain is good
        let b = |m: i64| format!(r#"{{"tag": 0, "level": 2, "corners": ["{m}"]}}"#);
        let text = format!(r#"{{"0": {}, "1": {}, "2": {}}}"#, b(-1), b(1), b(3));
        let p = parse_p_condition(&u, &text).unwrap();
        assert_eq!(p.len(), 3);
        assert!(parse_p_condition(&u, &format!(r#"{{"0": {}}}"#, b(-1))).is_err());
        let text = to_json(&p);
        assert_eq!(parse_p_condition(&u, &text).unwrap(), p);

        let loc = parse_location(
            &u,
            r#"{"boxes": [{"tag": 0, "level": 2, "corners": ["-1"]}], "colors": [3]}"#,
        )
        .unwrap();
        assert_eq!(loc.colors(), &[3]);
        let coloring = parse_coloring(&u, r#"{"1": {"tag": 0, "level": 2, "corners": ["1"]}}"#).unwrap();
        assert!(coloring.check(&u).is_ok());
    }
}
