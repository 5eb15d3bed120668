//! QAPLIB-style text format: `n`, then two `n×n` integer matrices, all
//! whitespace separated. Line breaks carry no meaning on input.

use std::fmt::Write as _;
use std::io::Read;

use super::{Instance, InstanceError};
use crate::Cost;

/// Which matrix comes first in the file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MatrixOrder {
    /// Flow matrix first, then distances.
    #[default]
    FlowFirst,
    DistanceFirst,
}

pub fn parse_qaplib<C: Cost>(text: &str, order: MatrixOrder) -> Result<Instance<C>, InstanceError> {
    let tokens: Vec<&str> = text.split_ascii_whitespace().collect();
    let Some(first) = tokens.first() else {
        return Err(InstanceError::Malformed { token: 0, message: "empty input".into() });
    };
    let n: usize = first.parse().map_err(|_| InstanceError::Malformed {
        token: 0,
        message: format!("expected instance size, found {first:?}"),
    })?;
    let nn = n.checked_mul(n).ok_or_else(|| InstanceError::Malformed {
        token: 0,
        message: format!("instance size {n} too large"),
    })?;
    let expected = 1 + 2 * nn;
    if tokens.len() != expected {
        return Err(InstanceError::Malformed {
            token: tokens.len().min(expected),
            message: format!("expected {expected} tokens for n = {n}, found {}", tokens.len()),
        });
    }
    let mut values = Vec::with_capacity(2 * nn);
    for (idx, tok) in tokens.iter().enumerate().skip(1) {
        let v = tok
            .parse::<i128>()
            .ok()
            .and_then(C::from_i128)
            .ok_or_else(|| InstanceError::Malformed {
                token: idx,
                message: format!("{tok:?} is not an integer of the cost type"),
            })?;
        values.push(v);
    }
    let second = values.split_off(nn);
    let (flow, dist) = match order {
        MatrixOrder::FlowFirst => (values, second),
        MatrixOrder::DistanceFirst => (second, values),
    };
    Instance::new("", n, flow, dist)
}

pub fn read_qaplib<C: Cost, R: Read>(mut reader: R, order: MatrixOrder) -> Result<Instance<C>, InstanceError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_qaplib(&text, order)
}

/// Canonical text: size line, blank line, one matrix row per line, blank line
/// between matrices.
pub fn write_qaplib<C: Cost>(inst: &Instance<C>, order: MatrixOrder) -> String {
    let n = inst.n();
    let (first, second) = match order {
        MatrixOrder::FlowFirst => (inst.flow_matrix(), inst.dist_matrix()),
        MatrixOrder::DistanceFirst => (inst.dist_matrix(), inst.flow_matrix()),
    };
    let mut out = String::new();
    writeln!(out, "{n}").unwrap();
    for m in [first, second] {
        out.push('\n');
        for row in m.chunks(n.max(1)) {
            let line: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
    }
    out
}
