"""Regenerate include/floc/warm_start_data.hpp.

The solver's default start for the unrestricted first-agent-fixed model on the
11-point circle sits on a degenerate plateau it cannot cross in sensible time,
so the repo pins a known-good starting basis as data. This script recomputes
that basis from scratch:

  1. export the model with export_lp(build_lp(make_circle(11), 3, flags),
     LpFormat::Mps) from any small driver, with flags.fix_first_agent = true
     and everything else off;
  2. run  python3 tools/recompute_start_basis.py model.mps > new_header.hpp
  3. replace include/floc/warm_start_data.hpp with the output.

The basis is a hint, not an authority: at solve time the library re-proves
optimality with its exact rational certificate, so a wrong or stale basis can
slow a solve down but can never change a result.

Method: solve the LP with scipy's HiGHS frontend, replicate the library's
standard-form slack layout, take every column that is positive at the optimum,
and complete to a full row basis with a preference-weighted rank-revealing QR.
"""

import sys

import numpy as np
import scipy.linalg
from scipy.optimize import linprog


def parse_free_mps(path):
    """Free MPS as written by export_lp: row order and first-appearance column
    order match the in-memory model."""
    section = None
    obj_name = None
    row_order = []
    row_rel = {}
    var_order = []
    var_idx = {}
    entries = []
    obj = {}
    rhs = {}
    with open(path) as f:
        for line in f:
            if line.startswith('*') or not line.strip():
                continue
            tok = line.split()
            if line[0] not in ' \t':
                section = tok[0]
                continue
            if section == 'ROWS':
                rel, name = tok
                if rel == 'N':
                    obj_name = name
                else:
                    row_rel[name] = rel
                    row_order.append(name)
            elif section == 'COLUMNS':
                var = tok[0]
                if var not in var_idx:
                    var_idx[var] = len(var_order)
                    var_order.append(var)
                j = var_idx[var]
                for k in range(1, len(tok), 2):
                    if tok[k] == obj_name:
                        obj[j] = float(tok[k + 1])
                    else:
                        entries.append((j, tok[k], float(tok[k + 1])))
            elif section == 'RHS':
                for k in range(1, len(tok), 2):
                    rhs[tok[k]] = float(tok[k + 1])
    return row_order, row_rel, var_order, entries, obj, rhs


def emit_header(basis):
    lines = []
    cur = '    '
    for j in basis:
        tok = '%d,' % j
        if len(cur) + len(tok) > 99:
            lines.append(cur.rstrip())
            cur = '    '
        cur += tok + ' '
    lines.append(cur.rstrip().rstrip(','))
    body = '\n'.join(lines)
    print('''#pragma once
// Pinned simplex starting basis for the one model family whose default start
// sits on a huge degenerate plateau: the unrestricted first-agent-fixed
// three-agent model on the 11-point circle. Computed offline with an
// independent LP solver (tools/recompute_start_basis.py regenerates it) and
// never trusted: the solver only uses it as a starting point, and the exact
// rational certificate re-proves optimality from scratch on every solve. If
// the model layout ever drifts, installing the basis fails and the solver
// falls back to a cold start.

#include <vector>

namespace floc {
namespace detail {

inline const std::vector<int>& circle11_start_basis() {
    static const std::vector<int> ids = {
%s};
    return ids;
}

}  // namespace detail
}  // namespace floc''' % body)


def main():
    path = sys.argv[1]
    row_order, row_rel, var_order, entries, obj, rhs = parse_free_mps(path)
    m = len(row_order)
    n = len(var_order)
    rpos = {name: i for i, name in enumerate(row_order)}
    A = np.zeros((m, n))
    for j, rname, val in entries:
        A[rpos[rname], j] = val
    b = np.zeros(m)
    for name, val in rhs.items():
        if name in rpos:
            b[rpos[name]] = val
    rel = np.array([row_rel[name] for name in row_order])

    # standard form keeps every rhs nonnegative
    for i in range(m):
        if b[i] < 0:
            b[i] = -b[i]
            A[i, :] = -A[i, :]
            rel[i] = {'L': 'G', 'G': 'L', 'E': 'E'}[rel[i]]

    ub = rel == 'L'
    ge = rel == 'G'
    eq = rel == 'E'
    A_ub = np.vstack([A[ub], -A[ge]]) if (ub.any() or ge.any()) else None
    b_ub = np.concatenate([b[ub], -b[ge]]) if A_ub is not None else None
    c = np.zeros(n)
    for j, val in obj.items():
        c[j] = val
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A[eq] if eq.any() else None,
                  b_eq=b[eq] if eq.any() else None, bounds=(0, None), method='highs')
    assert res.status == 0, res.message
    x = res.x
    print('objective %.12f' % res.fun, file=sys.stderr)

    # slack ids follow the structurals, one per inequality row in row order
    slack_id = np.full(m, -1, dtype=int)
    nxt = n
    for i in range(m):
        if rel[i] != 'E':
            slack_id[i] = nxt
            nxt += 1
    total = nxt
    act = A @ x
    sval = np.where(rel == 'L', b - act, act - b)

    cols = np.zeros((m, total))
    cols[:, :n] = A
    for i in range(m):
        if slack_id[i] >= 0:
            cols[i, slack_id[i]] = 1.0 if rel[i] == 'L' else -1.0

    val = np.zeros(total)
    val[:n] = x
    for i in range(m):
        if slack_id[i] >= 0:
            val[slack_id[i]] = sval[i]
    pref = val > 1e-8
    scale = np.where(pref, 1e3, 1e-3)
    _, R, piv = scipy.linalg.qr(cols * scale, mode='economic', pivoting=True)
    diag = np.abs(np.diag(R))
    rank = int((diag > diag[0] * 1e-10).sum())
    assert rank == m, 'row rank deficient: %d of %d' % (rank, m)
    basis = sorted(int(piv[k]) for k in range(m))
    print('basis of %d columns, %d positive at the optimum' % (m, int(pref.sum())),
          file=sys.stderr)
    emit_header(basis)


if __name__ == '__main__':
    main()
