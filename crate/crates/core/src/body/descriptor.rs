//! JSON descriptors for bodies. See `docs/schema.md` for the field list.

use std::sync::Arc;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use super::profile::{Bump, ProfileShape, RadialProfile};
use super::{BodyError, BodyKind, ConvexBody, Vec2};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BodyDescriptor {
    Disc,
    Ellipse {
        /// Row-major linear map taking the unit disc onto the ellipse.
        map: [[f64; 2]; 2],
    },
    Pnorm {
        p: f64,
    },
    Expfamily {
        directions: Vec<[f64; 2]>,
        w: f64,
    },
    Profile(ProfileDescriptor),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileDescriptor {
    pub shape: ProfileShapeDescriptor,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bumps: Vec<BumpDescriptor>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ProfileShapeDescriptor {
    Constant {
        radius: f64,
    },
    Square,
    /// `n` full-circle samples; `samples` holds the `n/2` values at
    /// `t_k = k π / (n/2)`, `k = 0..n/2`.
    Spline {
        n: usize,
        samples: Vec<f64>,
    },
    Blend {
        body: Box<BodyDescriptor>,
        weight: f64,
    },
    Gaugeblend {
        body: Box<BodyDescriptor>,
        weight: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpDescriptor {
    pub start: f64,
    pub width: f64,
    pub contact: f64,
    pub lambda: f64,
}

impl From<&ConvexBody> for BodyDescriptor {
    fn from(body: &ConvexBody) -> Self {
        match body.kind() {
            BodyKind::Disc => BodyDescriptor::Disc,
            BodyKind::Ellipse(e) => {
                let m = e.map();
                BodyDescriptor::Ellipse {
                    map: [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]],
                }
            }
            BodyKind::PNorm(p) => BodyDescriptor::Pnorm { p: *p },
            BodyKind::ExpFamily(e) => BodyDescriptor::Expfamily {
                directions: e.directions().iter().map(|a| [a.x, a.y]).collect(),
                w: e.weight(),
            },
            BodyKind::Profile(profile) => BodyDescriptor::Profile(ProfileDescriptor::from(profile)),
        }
    }
}

impl From<&RadialProfile> for ProfileDescriptor {
    fn from(profile: &RadialProfile) -> Self {
        let shape = match profile.shape() {
            ProfileShape::Constant(radius) => ProfileShapeDescriptor::Constant { radius: *radius },
            ProfileShape::Square => ProfileShapeDescriptor::Square,
            ProfileShape::Spline(spline) => ProfileShapeDescriptor::Spline {
                n: 2 * spline.nodes().len(),
                samples: spline.nodes().to_vec(),
            },
            ProfileShape::Blend { body, weight } => ProfileShapeDescriptor::Blend {
                body: Box::new(BodyDescriptor::from(body.as_ref())),
                weight: *weight,
            },
            ProfileShape::GaugeBlend { body, weight } => ProfileShapeDescriptor::Gaugeblend {
                body: Box::new(BodyDescriptor::from(body.as_ref())),
                weight: *weight,
            },
        };
        let bumps = profile
            .bumps()
            .iter()
            .map(|b| BumpDescriptor {
                start: b.start,
                width: b.width,
                contact: b.contact,
                lambda: b.lambda,
            })
            .collect();
        ProfileDescriptor { shape, bumps }
    }
}

impl TryFrom<&BodyDescriptor> for ConvexBody {
    type Error = BodyError;

    fn try_from(d: &BodyDescriptor) -> Result<Self, Self::Error> {
        match d {
            BodyDescriptor::Disc => Ok(ConvexBody::disc()),
            BodyDescriptor::Ellipse { map } => {
                ConvexBody::ellipse(Matrix2::new(map[0][0], map[0][1], map[1][0], map[1][1]))
            }
            BodyDescriptor::Pnorm { p } => ConvexBody::pnorm(*p),
            BodyDescriptor::Expfamily { directions, w } => ConvexBody::exp_family(
                directions.iter().map(|a| Vec2::new(a[0], a[1])).collect(),
                *w,
            ),
            BodyDescriptor::Profile(p) => {
                let profile = RadialProfile::try_from(p)?;
                if profile.is_square() {
                    return Ok(ConvexBody::square());
                }
                ConvexBody::from_convex_profile(profile)
            }
        }
    }
}

impl TryFrom<&ProfileDescriptor> for RadialProfile {
    type Error = BodyError;

    fn try_from(d: &ProfileDescriptor) -> Result<Self, Self::Error> {
        let shape = match &d.shape {
            ProfileShapeDescriptor::Constant { radius } => {
                RadialProfile::constant(*radius)?.shape().clone()
            }
            ProfileShapeDescriptor::Square => ProfileShape::Square,
            ProfileShapeDescriptor::Spline { n, samples } => {
                if *n != 2 * samples.len() {
                    return Err(BodyError::InvalidParameters(format!(
                        "spline declares n = {n} but stores {} half-circle samples",
                        samples.len()
                    )));
                }
                RadialProfile::from_half_samples(samples.clone())?
                    .shape()
                    .clone()
            }
            ProfileShapeDescriptor::Blend { body, weight } => {
                let body = ConvexBody::try_from(body.as_ref())?;
                RadialProfile::blend(Arc::new(body), *weight)?
                    .shape()
                    .clone()
            }
            ProfileShapeDescriptor::Gaugeblend { body, weight } => {
                let body = ConvexBody::try_from(body.as_ref())?;
                RadialProfile::gauge_blend(Arc::new(body), *weight)?
                    .shape()
                    .clone()
            }
        };
        if !d.bumps.is_empty() && matches!(shape, ProfileShape::Square) {
            return Err(BodyError::Bump(
                "the square profile cannot carry bumps".into(),
            ));
        }
        let bumps = d
            .bumps
            .iter()
            .map(|b| {
                if !(b.width > 0.0
                    && b.width < std::f64::consts::PI
                    && b.contact > 0.0
                    && b.contact < 1.0)
                {
                    return Err(BodyError::Bump(format!("malformed bump {b:?}")));
                }
                Ok(Bump {
                    start: b.start,
                    width: b.width,
                    contact: b.contact,
                    lambda: b.lambda,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RadialProfile::from_parts(shape, bumps))
    }
}

impl ConvexBody {
    pub fn descriptor(&self) -> BodyDescriptor {
        BodyDescriptor::from(self)
    }

    pub fn from_descriptor(d: &BodyDescriptor) -> Result<Self, BodyError> {
        ConvexBody::try_from(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors_roundtrip_through_json() {
        let bodies = vec![
            ConvexBody::disc(),
            ConvexBody::pnorm(3.5).unwrap(),
            ConvexBody::ellipse(Matrix2::new(2.0, 0.3, 0.0, 1.0)).unwrap(),
            ConvexBody::exp_family(
                vec![
                    Vec2::new(1.0, 0.0),
                    Vec2::new(0.0, 1.0),
                    Vec2::new(1.0, 1.0),
                ],
                2.0,
            )
            .unwrap(),
            ConvexBody::square(),
        ];
        for body in bodies {
            let json = serde_json::to_string(&body.descriptor()).unwrap();
            let back: BodyDescriptor = serde_json::from_str(&json).unwrap();
            let rebuilt = ConvexBody::from_descriptor(&back).unwrap();
            assert_eq!(rebuilt.descriptor(), body.descriptor());
            let x = Vec2::new(0.3, -1.1);
            assert_eq!(rebuilt.norm(&x).unwrap(), body.norm(&x).unwrap());
        }
    }

    #[test]
    fn parses_hand_written_descriptor() {
        let json = r#"{"kind": "expfamily", "directions": [[1,0],[0,1],[1,1]], "w": 2.0}"#;
        let d: BodyDescriptor = serde_json::from_str(json).unwrap();
        assert!(ConvexBody::from_descriptor(&d)
            .unwrap()
            .has_positive_curvature());
        let bad = r#"{"kind": "pnorm", "p": 0.5}"#;
        let d: BodyDescriptor = serde_json::from_str(bad).unwrap();
        assert!(ConvexBody::from_descriptor(&d).is_err());
    }
}
