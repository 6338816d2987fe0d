//! Browser bindings. Each export takes plain strings from form fields and
//! returns a JSON string: either the result or `{"error": ...}`. Nothing here
//! touches JS values, so the same functions run natively in tests.

use fan_fraisse::amalgam::amalgamate_chained;
use fan_fraisse::chains::{all_maximal_chains, chain_image_of_map, multinomial, ChainEpi};
use fan_fraisse::{ChainedFan, Error, Fan, Mode};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Chains listed at most; the count is always exact.
pub const LIST_LIMIT: usize = 200;

fn parse_list(field: &str, s: &str) -> Result<Vec<usize>, Error> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("{field}: {x:?} is not a number")))
        })
        .collect()
}

fn chained(field: &str, branches: &str, order: &str) -> Result<ChainedFan, Error> {
    let fan = Fan::from_branches(&parse_list(field, branches)?)?;
    if order.trim().is_empty() {
        Ok(ChainedFan::canonical(&fan))
    } else {
        ChainedFan::new(fan, parse_list(field, order)?)
    }
}

fn respond(r: Result<Value, Error>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

/// Number of maximal chains of the fan with these branch lengths, with the
/// first few chains as vertex orders.
#[wasm_bindgen]
pub fn count_chains(branches: &str) -> String {
    respond((|| {
        let lengths = parse_list("branches", branches)?;
        let fan = Fan::from_branches(&lengths)?;
        let count = multinomial(&lengths);
        let listed: Vec<Vec<usize>> = if count <= LIST_LIMIT as u128 {
            all_maximal_chains(&fan).iter().map(|c| c.order().to_vec()).collect()
        } else {
            Vec::new()
        };
        Ok(json!({ "count": count.to_string(), "chains": listed, "vertices": fan.vertex_count() }))
    })())
}

/// Image of the chain `order` on `source` under the vertex map `map`.
#[wasm_bindgen]
pub fn chain_image(source: &str, order: &str, target: &str, map: &str) -> String {
    respond((|| {
        let sc = chained("source", source, order)?;
        let t = Fan::from_branches(&parse_list("target", target)?)?;
        let image = chain_image_of_map(&parse_list("map", map)?, &t, &sc)?;
        Ok(json!({
            "links": image.links,
            "valid": image.valid,
            "chain": image.chain.map(|c| c.order().to_vec()),
        }))
    })())
}

/// Amalgamates `f: B → A` and `g: D → A`; `mode` is "directed" or
/// "symmetrized". Orders may be left empty for the canonical chain.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn amalgamate(
    a: &str,
    a_order: &str,
    b: &str,
    b_order: &str,
    f: &str,
    d: &str,
    d_order: &str,
    g: &str,
    mode: &str,
) -> String {
    respond((|| {
        let mode: Mode = mode.parse()?;
        let ac = chained("A", a, a_order)?;
        let f = ChainEpi::new(chained("B", b, b_order)?, ac.clone(), parse_list("f", f)?, mode)?;
        let g = ChainEpi::new(chained("D", d, d_order)?, ac, parse_list("g", g)?, mode)?;
        let am = amalgamate_chained(&f, &g)?;
        let commutes = (0..am.e.fan().vertex_count()).all(|v| f.map()[am.k.map()[v]] == g.map()[am.l.map()[v]]);
        Ok(json!({
            "branches": am.e.fan().branch_lengths(),
            "order": am.e.order(),
            "k": am.k.map(),
            "l": am.l.map(),
            "commutes": commutes,
        }))
    })())
}
