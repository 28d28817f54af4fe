//! JSON body format: `{"dim": n, "vertices": [[...], ...], "name": "..."}`.

use serde::{Deserialize, Serialize};

use super::Body;
use crate::error::{Error, Result};
use crate::linalg::Vector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodyJson {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl BodyJson {
    pub fn into_body(self) -> Result<Body> {
        if self.vertices.is_empty() {
            return Err(Error::Json("vertex list is empty".into()));
        }
        if let Some(v) = self.vertices.iter().find(|v| v.len() != self.dim) {
            return Err(Error::Json(format!(
                "vertex {:?} has {} coordinates, expected {}",
                v,
                v.len(),
                self.dim
            )));
        }
        let pts = self
            .vertices
            .iter()
            .map(|v| Vector::from_column_slice(v))
            .collect();
        let body = Body::from_points(self.dim, pts)?;
        Ok(match self.name {
            Some(n) => body.with_name(n),
            None => body,
        })
    }
}

impl Body {
    pub fn to_json(&self) -> BodyJson {
        BodyJson {
            dim: self.dim(),
            vertices: self.vertices().iter().map(|v| v.iter().copied().collect()).collect(),
            name: self.name().map(str::to_owned),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Body> {
        let j: BodyJson = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        j.into_body()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("body JSON serializes")
    }
}
