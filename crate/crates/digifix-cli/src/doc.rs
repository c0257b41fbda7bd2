//! The JSON document format: a space, optionally a self-map and a
//! condition, with validation errors that name what went wrong.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use digifix::{
    build_space, pt, Condition, ConditionError, ConditionFamily, ConditionKind, DigitalImage,
    LatticeError, Metric, MetricError, SelfMap, Space,
};

#[derive(Debug, Error)]
pub enum DocError {
    #[error("point #{index} has {got} coordinates, document says dimension {expected}")]
    Dimension {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("map entry references index {index}, but the image has {size} points")]
    MapIndexOutOfRange { index: usize, size: usize },
    #[error("map entry references point {point}, which is not in the image")]
    MapPointUnknown { point: String },
    #[error("map lists index {index} as a source more than once")]
    MapDuplicateSource { index: usize },
    #[error("map never assigns an image to index {index}; self-maps must be total")]
    MapMissingSource { index: usize },
    #[error(transparent)]
    Condition(#[from] ConditionError),
    #[error("{family} takes {expected} coefficients, got {got}")]
    ConditionArity {
        family: ConditionFamily,
        got: usize,
        expected: usize,
    },
    #[error("this command needs a `map` entry in the document")]
    MissingMap,
    #[error("this command needs a `condition` entry in the document")]
    MissingCondition,
}

/// One self-contained problem instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub dimension: usize,
    pub points: Vec<Vec<i64>>,
    pub adjacency: AdjacencyDoc,
    pub metric: MetricDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<ConditionDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum AdjacencyDoc {
    #[serde(rename = "c_u")]
    Cu { u: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricDoc {
    Lp { p: f64 },
    ShortestPath,
    Table { rows: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapDoc {
    Table { pairs: Vec<MapPair> },
}

/// A map entry, either `[source_index, target_index]` or
/// `[[source coords], [target coords]]`. The shapes cannot be confused.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapPair {
    Indices(usize, usize),
    Points(Vec<i64>, Vec<i64>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionDoc {
    pub variant: String,
    pub coefficients: Vec<f64>,
}

impl Document {
    pub fn image(&self) -> Result<DigitalImage, DocError> {
        for (index, coords) in self.points.iter().enumerate() {
            if coords.len() != self.dimension {
                return Err(DocError::Dimension {
                    index,
                    got: coords.len(),
                    expected: self.dimension,
                });
            }
        }
        let points = self.points.iter().map(|c| pt(c)).collect();
        let AdjacencyDoc::Cu { u } = self.adjacency;
        Ok(DigitalImage::new(points, u)?)
    }

    pub fn metric(&self) -> Result<Metric, DocError> {
        Ok(match &self.metric {
            MetricDoc::Lp { p } => Metric::lp(*p)?,
            MetricDoc::ShortestPath => Metric::shortest_path(),
            MetricDoc::Table { rows } => Metric::table(rows.clone())?,
        })
    }

    pub fn space(&self) -> Result<Space, DocError> {
        Ok(build_space(self.image()?, self.metric()?)?)
    }

    /// Decodes the map against `image`, insisting on totality: every index
    /// appears as a source exactly once.
    pub fn self_map(&self, image: &DigitalImage) -> Result<Option<SelfMap>, DocError> {
        let Some(MapDoc::Table { pairs }) = &self.map else {
            return Ok(None);
        };
        let n = image.len();
        let mut table = vec![usize::MAX; n];
        for pair in pairs {
            let (src, dst) = match pair {
                MapPair::Indices(i, j) => {
                    for ix in [*i, *j] {
                        if ix >= n {
                            return Err(DocError::MapIndexOutOfRange { index: ix, size: n });
                        }
                    }
                    (*i, *j)
                }
                MapPair::Points(x, y) => {
                    let lookup = |coords: &[i64]| {
                        image
                            .index_of(&pt(coords))
                            .ok_or_else(|| DocError::MapPointUnknown {
                                point: pt(coords).to_string(),
                            })
                    };
                    (lookup(x)?, lookup(y)?)
                }
            };
            if table[src] != usize::MAX {
                return Err(DocError::MapDuplicateSource { index: src });
            }
            table[src] = dst;
        }
        if let Some(index) = table.iter().position(|&t| t == usize::MAX) {
            return Err(DocError::MapMissingSource { index });
        }
        Ok(Some(SelfMap::new(table)?))
    }

    pub fn require_map(&self, image: &DigitalImage) -> Result<SelfMap, DocError> {
        self.self_map(image)?.ok_or(DocError::MissingMap)
    }

    pub fn condition(&self) -> Result<Option<Condition>, DocError> {
        let Some(doc) = &self.condition else {
            return Ok(None);
        };
        let family: ConditionFamily = doc.variant.parse()?;
        let expected = condition_arity(family);
        if doc.coefficients.len() != expected {
            return Err(DocError::ConditionArity {
                family,
                got: doc.coefficients.len(),
                expected,
            });
        }
        let c = &doc.coefficients;
        let kind = match family {
            ConditionFamily::Banach => ConditionKind::Banach { alpha: c[0] },
            ConditionFamily::Quasi => ConditionKind::Quasi { c: c[0] },
            ConditionFamily::SumType => ConditionKind::SumType { a: c[0], b: c[1] },
            ConditionFamily::Rational => ConditionKind::Rational {
                a: c[0],
                b: c[1],
                c: c[2],
            },
            ConditionFamily::Expansive => ConditionKind::Expansive { delta3: c[0] },
            ConditionFamily::OaaG => ConditionKind::OaaG {
                a: c[0],
                b: c[1],
                c: c[2],
            },
            ConditionFamily::OaaIterated => ConditionKind::OaaIterated {
                e: c[0],
                f: c[1],
                g: c[2],
                h: c[3],
                i: c[4],
            },
            ConditionFamily::Saljah => ConditionKind::Saljah {
                k1: c[0],
                k2: c[1],
                k3: c[2],
            },
        };
        Ok(Some(Condition::from_kind(kind)?))
    }

    pub fn require_condition(&self) -> Result<Condition, DocError> {
        self.condition()?.ok_or(DocError::MissingCondition)
    }
}

pub fn condition_arity(family: ConditionFamily) -> usize {
    match family {
        ConditionFamily::Banach | ConditionFamily::Quasi | ConditionFamily::Expansive => 1,
        ConditionFamily::SumType => 2,
        ConditionFamily::Rational | ConditionFamily::OaaG | ConditionFamily::Saljah => 3,
        ConditionFamily::OaaIterated => 5,
    }
}

/// Short human description of a metric, for report headers.
pub fn metric_label(metric: &Metric) -> String {
    if let Some(p) = metric.is_lp() {
        format!("lp({p})")
    } else if metric.is_shortest_path() {
        "shortest_path".to_string()
    } else {
        "table".to_string()
    }
}

impl fmt::Display for MapPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapPair::Indices(i, j) => write!(f, "{i} -> {j}"),
            MapPair::Points(x, y) => write!(f, "{} -> {}", pt(x), pt(y)),
        }
    }
}
