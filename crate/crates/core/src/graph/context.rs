// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use crate::frontend::{AstKind, AstNode, Visibility};

use super::{AccessGuard, ContextKind, ExecutionContext, GraphError};

const OWNER_MODIFIERS: &[&str] = &["onlyOwner", "onlyAdmin"];

/// One context per function and modifier, in declaration order.
pub fn extract_contexts(contract: &AstNode) -> Result<Vec<ExecutionContext>, GraphError> {
    let AstKind::Contract { .. } = &contract.kind else {
        return Err(GraphError::NotAContract(contract.kind.label().to_string()));
    };
    let state_vars: Vec<&str> = contract
        .children
        .iter()
        .filter_map(|m| match &m.kind {
            AstKind::StateVar { name, .. } => Some(name.as_str()),
            _ => None,
        })
        .collect();

    // Guard implied by each modifier's own body.
    let modifier_guards: BTreeMap<&str, AccessGuard> = contract
        .children
        .iter()
        .filter_map(|m| match &m.kind {
            AstKind::Modifier { name, .. } => {
                Some((name.as_str(), prologue_guard(&m.children, &state_vars)))
            }
            _ => None,
        })
        .collect();

    let mut out = Vec::new();
    for member in &contract.children {
        let ctx = match &member.kind {
            AstKind::Function {
                name,
                function_kind,
                visibility,
                payable,
                modifiers,
                params,
            } => {
                let mut guard = prologue_guard(&member.children, &state_vars);
                for m in modifiers {
                    guard = guard.max(modifier_guard(m, &modifier_guards));
                }
                ExecutionContext {
                    id: out.len(),
                    name: name.clone(),
                    kind: ContextKind::Function(*function_kind),
                    visibility: *visibility,
                    payable: *payable,
                    modifiers: modifiers.clone(),
                    params: params.clone(),
                    access_guard: guard,
                    entry: None,
                }
            }
            AstKind::Modifier { name, params } => ExecutionContext {
                id: out.len(),
                name: name.clone(),
                kind: ContextKind::Modifier,
                visibility: Visibility::Internal,
                payable: false,
                modifiers: Vec::new(),
                params: params.clone(),
                access_guard: prologue_guard(&member.children, &state_vars),
                entry: None,
            },
            _ => continue,
        };
        out.push(ctx);
    }
    Ok(out)
}

fn modifier_guard(name: &str, defined: &BTreeMap<&str, AccessGuard>) -> AccessGuard {
    if OWNER_MODIFIERS.contains(&name) {
        return AccessGuard::OwnerOnly;
    }
    match defined.get(name) {
        Some(AccessGuard::None) | None if name.starts_with("only") => AccessGuard::RoleGuarded,
        Some(g) => *g,
        None => AccessGuard::None,
    }
}

/// Strongest guard established by the leading `require` statements of a body.
fn prologue_guard(body: &[AstNode], state_vars: &[&str]) -> AccessGuard {
    let mut guard = AccessGuard::None;
    for stmt in body {
        let AstKind::Require { .. } = stmt.kind else {
            break;
        };
        let Some(cond) = stmt.children.first() else {
            continue;
        };
        guard = guard.max(condition_guard(cond, state_vars));
    }
    guard
}

fn condition_guard(cond: &AstNode, state_vars: &[&str]) -> AccessGuard {
    if let AstKind::BinaryOp { op } = &cond.kind {
        if op == "==" {
            let (a, b) = (&cond.children[0], &cond.children[1]);
            let is_sender = |n: &AstNode| n.path().as_deref() == Some("msg.sender");
            let is_state = |n: &AstNode| {
                n.path()
                    .is_some_and(|p| state_vars.contains(&p.as_str()))
            };
            if (is_sender(a) && is_state(b)) || (is_state(a) && is_sender(b)) {
                return AccessGuard::OwnerOnly;
            }
        }
        if op == "&&" {
            return condition_guard(&cond.children[0], state_vars)
                .max(condition_guard(&cond.children[1], state_vars));
        }
    }
    let mut role = false;
    cond.walk(&mut |n| match &n.kind {
        AstKind::Index => role |= n.children[1].path().as_deref() == Some("msg.sender"),
        AstKind::Call { .. } => {
            role |= n.children[1..]
                .iter()
                .any(|a| a.path().as_deref() == Some("msg.sender"))
        }
        _ => {}
    });
    if role {
        AccessGuard::RoleGuarded
    } else {
        AccessGuard::None
    }
}
