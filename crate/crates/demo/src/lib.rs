//! Browser bindings for three table lookups on a user-supplied quiver.
//!
//! Every entry point takes the quiver JSON text and returns a JSON string;
//! errors surface as thrown strings on the JS side.

use qgk::cuspidal::{absolutely_cuspidal, ip_general};
use qgk::gkm::EngineConfig;
use qgk::kac::{hua_kac, Flavour};
use qgk::quiver::{DimVector, Quiver};
use qgk::roots::canonical_decomposition;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Keeps a page interaction under a few seconds in the browser.
pub const MAX_BOUND: u32 = 6;

fn check_bound(bound: u32) -> Result<(), String> {
    if (1..=MAX_BOUND).contains(&bound) {
        Ok(())
    } else {
        Err(format!("bound must lie in 1..={MAX_BOUND}"))
    }
}

fn rows<'a>(it: impl IntoIterator<Item = (&'a DimVector, String)>) -> Value {
    let mut v: Vec<(&DimVector, String)> = it.into_iter().collect();
    v.sort_by(|a, b| (a.0.total(), a.0).cmp(&(b.0.total(), b.0)));
    Value::Array(v.into_iter().map(|(d, p)| json!([d.to_string(), p])).collect())
}

pub fn kac_json(quiver: &str, bound: u32) -> Result<String, String> {
    check_bound(bound)?;
    let q = Quiver::from_json(quiver).map_err(|e| e.to_string())?;
    let kac = hua_kac(&q, bound).map_err(|e| e.to_string())?;
    Ok(json!({ "kac": rows(kac.iter().map(|(d, a)| (d, a.render()))) }).to_string())
}

pub fn cuspidal_json(quiver: &str, bound: u32) -> Result<String, String> {
    check_bound(bound)?;
    let q = Quiver::from_json(quiver).map_err(|e| e.to_string())?;
    let t = absolutely_cuspidal(&q, bound, Flavour::Plain, &[], EngineConfig::default()).map_err(|e| e.to_string())?;
    Ok(json!({
        "abs": rows(t.abs.iter().map(|(d, c)| (d, c.render()))),
        "cusp": rows(t.cusp.iter().map(|(d, c)| (d, c.render()))),
    })
    .to_string())
}

/// Canonical decomposition of `dim` together with its intersection
/// Poincaré polynomial in `v`.
pub fn decompose_json(quiver: &str, dim: &str) -> Result<String, String> {
    let q = Quiver::from_json(quiver).map_err(|e| e.to_string())?;
    let d = q.parse_dim(dim).map_err(|e| e.to_string())?;
    check_bound(d.total())?;
    let parts = canonical_decomposition(&q, &d).map_err(|e| e.to_string())?;
    let t =
        absolutely_cuspidal(&q, d.total(), Flavour::Plain, &[], EngineConfig::default()).map_err(|e| e.to_string())?;
    let ip = ip_general(&t, &d).map_err(|e| e.to_string())?;
    let text: Vec<String> = parts
        .iter()
        .map(|(p, m)| {
            if *m == 1 {
                format!("({p})")
            } else {
                format!("{m}*({p})")
            }
        })
        .collect();
    Ok(json!({
        "parts": parts.iter().map(|(p, m)| json!([p.to_string(), m])).collect::<Vec<_>>(),
        "text": text.join(" + "),
        "ip": ip.render_var("v"),
    })
    .to_string())
}

#[wasm_bindgen]
pub fn kac(quiver: &str, bound: u32) -> Result<String, JsValue> {
    kac_json(quiver, bound).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn cuspidal(quiver: &str, bound: u32) -> Result<String, JsValue> {
    cuspidal_json(quiver, bound).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn decompose(quiver: &str, dim: &str) -> Result<String, JsValue> {
    decompose_json(quiver, dim).map_err(|e| JsValue::from_str(&e))
}
