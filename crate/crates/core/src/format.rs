//! JSON form of vertex functions and sphere/ball data:
//!
//! ```json
//! {"q":3,"n":4,"eigenindex":2,"values":[{"w":"0000","re":0.5,"im":0.0}]}
//! ```
//!
//! Omitted words carry the value zero. Sphere data may add a `"d"` field with
//! the radius; without it the radius is read off the listed words.

use std::collections::HashSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::recon::{BallData, SphereData};
use crate::scheme::{SchemeParams, Word};
use crate::spectral::VertexFunction;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueEntry {
    pub w: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionDoc {
    pub q: usize,
    pub n: usize,
    #[serde(default)]
    pub eigenindex: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub values: Vec<ValueEntry>,
}

impl FunctionDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn params(&self) -> Result<SchemeParams> {
        SchemeParams::new(self.q, self.n)
    }

    /// Parsed entries; duplicate words are rejected.
    pub fn entries(&self, params: &SchemeParams) -> Result<Vec<(Word, Complex64)>> {
        let mut seen = HashSet::new();
        self.values
            .iter()
            .map(|e| {
                let w = params.parse_word(&e.w)?;
                if !seen.insert(w.clone()) {
                    return Err(Error::Format(format!("word {} listed twice", e.w)));
                }
                Ok((w, Complex64::new(e.re, e.im)))
            })
            .collect()
    }
}

fn entry(w: &Word, v: Complex64) -> ValueEntry {
    ValueEntry {
        w: w.to_string(),
        re: v.re,
        im: v.im,
    }
}

fn doc<I>(params: &SchemeParams, eigenindex: Option<usize>, d: Option<usize>, entries: I) -> FunctionDoc
where
    I: IntoIterator<Item = (Word, Complex64)>,
{
    FunctionDoc {
        q: params.q(),
        n: params.n(),
        eigenindex,
        d,
        values: entries.into_iter().map(|(w, v)| entry(&w, v)).collect(),
    }
}

/// Every word, in rank order.
pub fn function_to_doc(f: &VertexFunction) -> FunctionDoc {
    let params = *f.params();
    doc(
        &params,
        f.eigenindex(),
        None,
        f.values().iter().enumerate().map(|(r, v)| (params.word(r), *v)),
    )
}

pub fn function_from_doc(doc: &FunctionDoc) -> Result<VertexFunction> {
    let params = doc.params()?;
    let mut f = VertexFunction::zeros(params);
    for (w, v) in doc.entries(&params)? {
        f.values_mut()[params.rank(&w)] = v;
    }
    Ok(f.with_eigenindex(doc.eigenindex))
}

pub fn sphere_to_doc(sphere: &SphereData, h: Option<usize>) -> FunctionDoc {
    doc(sphere.params(), h, Some(sphere.radius()), sphere.entries())
}

/// Sphere data from a document. The radius is taken from `radius`, else
/// from the `"d"` field, else from the common weight of the listed words.
pub fn sphere_from_doc(doc: &FunctionDoc, radius: Option<usize>) -> Result<SphereData> {
    let params = doc.params()?;
    let entries = doc.entries(&params)?;
    let d = match radius.or(doc.d) {
        Some(d) => d,
        None => {
            let weights: HashSet<usize> = entries.iter().map(|(w, _)| w.weight()).collect();
            match weights.len() {
                1 => *weights.iter().next().expect("one element"),
                0 => return Err(Error::Format("empty sphere data without a radius".into())),
                _ => return Err(Error::Format("sphere words have different weights".into())),
            }
        }
    };
    SphereData::from_entries(params, d, entries)
}

pub fn ball_to_doc(ball: &BallData, h: Option<usize>) -> FunctionDoc {
    doc(ball.params(), h, Some(ball.radius()), ball.entries())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::random_eigenfunction;

    #[test]
    fn function_round_trip() {
        let s = SchemeParams::new(3, 3).unwrap();
        let f = random_eigenfunction(&s, 1, 3).unwrap();
        let text = function_to_doc(&f).to_json();
        assert!(text.starts_with(r#"{"q":3,"n":3,"eigenindex":1,"values":[{"w":"000","#));
        let back = function_from_doc(&FunctionDoc::from_json(&text).unwrap()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn omitted_words_are_zero() {
        let text = r#"{"q":3,"n":2,"values":[{"w":"12","re":1.5,"im":-1}]}"#;
        let f = function_from_doc(&FunctionDoc::from_json(text).unwrap()).unwrap();
        assert_eq!(f.eigenindex(), None);
        assert_eq!(f.values()[5], Complex64::new(1.5, -1.0));
        assert_eq!(f.values().iter().filter(|v| v.norm() > 0.0).count(), 1);
    }

    #[test]
    fn sphere_radius_resolution() {
        let text = r#"{"q":3,"n":3,"eigenindex":2,"values":[{"w":"110","re":1,"im":0},{"w":"021","re":2,"im":0}]}"#;
        let d = FunctionDoc::from_json(text).unwrap();
        let s = sphere_from_doc(&d, None).unwrap();
        assert_eq!(s.radius(), 2);
        assert_eq!(s.entries().len(), 12);
        assert!(sphere_from_doc(&d, Some(1)).is_err());
        let mixed = r#"{"q":3,"n":3,"values":[{"w":"100","re":1,"im":0},{"w":"021","re":2,"im":0}]}"#;
        assert!(sphere_from_doc(&FunctionDoc::from_json(mixed).unwrap(), None).is_err());
        let empty = r#"{"q":3,"n":3,"d":1,"values":[]}"#;
        assert_eq!(sphere_from_doc(&FunctionDoc::from_json(empty).unwrap(), None).unwrap().radius(), 1);
        let dup = r#"{"q":3,"n":3,"values":[{"w":"100","re":1,"im":0},{"w":"100","re":2,"im":0}]}"#;
        assert!(sphere_from_doc(&FunctionDoc::from_json(dup).unwrap(), None).is_err());
    }
}
