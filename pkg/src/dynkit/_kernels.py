"""Compiled recursive sweeps over packed kinematic-tree arrays.

Each kernel runs one full evaluation (forward kinematics included) in a
single compiled call.  The model layer packs the tree into three arrays:

* ``ints``  -- (n, 2) int64: 0-based parent (-1 for the fixed base), joint type
  (0 revolute, 1 prismatic);
* ``geom``  -- (n, 15) float64: unit axis, tree translation, tree rotation in
  row-major order;
* ``inertia6`` -- (n, 6, 6) float64: dense spatial inertias.

Spatial vectors are angular-first 6-vectors and transforms are dense 6x6
motion realizations ``[[R, 0], [-R S(p), R]]``.  Callers own all output and
scratch buffers, so repeated evaluations allocate nothing.
"""

import numpy as np
from numba import njit

KIND_SIMPLE = 0
KIND_NS = 1


@njit(inline="always")
def _joint_transform(jtype, g, qi, Xi, phi_i):
    # Fill the parent->body transform and motion subspace for one joint.
    # g packs [axis(3), translation(3), rotation(9, row-major)].
    ax, ay, az = g[0], g[1], g[2]
    if jtype == 0:  # revolute: R = Rot(axis, q)^T @ Rtree, p = ptree
        c = np.cos(qi)
        s = np.sin(qi)
        v = 1.0 - c
        r00 = c + v * ax * ax
        r01 = v * ax * ay + s * az
        r02 = v * ax * az - s * ay
        r10 = v * ax * ay - s * az
        r11 = c + v * ay * ay
        r12 = v * ay * az + s * ax
        r20 = v * ax * az + s * ay
        r21 = v * ay * az - s * ax
        r22 = c + v * az * az
        px, py, pz = g[3], g[4], g[5]
        phi_i[0] = ax
        phi_i[1] = ay
        phi_i[2] = az
        phi_i[3] = 0.0
        phi_i[4] = 0.0
        phi_i[5] = 0.0
        for r in range(3):
            if r == 0:
                m0, m1, m2 = r00, r01, r02
            elif r == 1:
                m0, m1, m2 = r10, r11, r12
            else:
                m0, m1, m2 = r20, r21, r22
            Xi[r, 0] = m0 * g[6] + m1 * g[9] + m2 * g[12]
            Xi[r, 1] = m0 * g[7] + m1 * g[10] + m2 * g[13]
            Xi[r, 2] = m0 * g[8] + m1 * g[11] + m2 * g[14]
    else:  # prismatic: R = Rtree, p = ptree + Rtree^T (q axis)
        px = g[3] + qi * (g[6] * ax + g[9] * ay + g[12] * az)
        py = g[4] + qi * (g[7] * ax + g[10] * ay + g[13] * az)
        pz = g[5] + qi * (g[8] * ax + g[11] * ay + g[14] * az)
        phi_i[0] = 0.0
        phi_i[1] = 0.0
        phi_i[2] = 0.0
        phi_i[3] = ax
        phi_i[4] = ay
        phi_i[5] = az
        for r in range(3):
            Xi[r, 0] = g[6 + 3 * r]
            Xi[r, 1] = g[7 + 3 * r]
            Xi[r, 2] = g[8 + 3 * r]
    # lower blocks: [-R S(p), R]
    for r in range(3):
        Xi[r, 3] = 0.0
        Xi[r, 4] = 0.0
        Xi[r, 5] = 0.0
        Xi[r + 3, 3] = Xi[r, 0]
        Xi[r + 3, 4] = Xi[r, 1]
        Xi[r + 3, 5] = Xi[r, 2]
        Xi[r + 3, 0] = -(Xi[r, 1] * pz - Xi[r, 2] * py)
        Xi[r + 3, 1] = -(Xi[r, 2] * px - Xi[r, 0] * pz)
        Xi[r + 3, 2] = -(Xi[r, 0] * py - Xi[r, 1] * px)


@njit(inline="always")
def _fk(ints, geom, q, mats, vecs):
    # Per-joint transforms into mats[0:n] and subspaces into vecs[0:n].
    n = q.shape[0]
    for i in range(n):
        _joint_transform(ints[i, 1], geom[i], q[i], mats[i], vecs[i])


@njit(inline="always")
def _cross_motion_apply(v, w, out):
    # out = (v x) w for motion vectors
    out[0] = v[1] * w[2] - v[2] * w[1]
    out[1] = v[2] * w[0] - v[0] * w[2]
    out[2] = v[0] * w[1] - v[1] * w[0]
    out[3] = v[4] * w[2] - v[5] * w[1] + v[1] * w[5] - v[2] * w[4]
    out[4] = v[5] * w[0] - v[3] * w[2] + v[2] * w[3] - v[0] * w[5]
    out[5] = v[3] * w[1] - v[4] * w[0] + v[0] * w[4] - v[1] * w[3]


@njit(inline="always")
def _cross_force_add(v, f, out):
    # out += (v x*) f for force vectors
    out[0] += v[1] * f[2] - v[2] * f[1] + v[4] * f[5] - v[5] * f[4]
    out[1] += v[2] * f[0] - v[0] * f[2] + v[5] * f[3] - v[3] * f[5]
    out[2] += v[0] * f[1] - v[1] * f[0] + v[3] * f[4] - v[4] * f[3]
    out[3] += v[1] * f[5] - v[2] * f[4]
    out[4] += v[2] * f[3] - v[0] * f[5]
    out[5] += v[0] * f[4] - v[1] * f[3]


@njit(inline="always")
def _mat6_vec(A, x, y):
    for r in range(6):
        s = 0.0
        for k in range(6):
            s += A[r, k] * x[k]
        y[r] = s


@njit(inline="always")
def _factorization(kind, v, I, B):
    # Velocity-product factor B with f = I a + B v.  The simple kind is
    # (v x*) I.  The symmetric-rate kind halves (v x*) I + N(I v) - I (v x),
    # where N(f) v = (v x*) f, so that the rate of a composite inertia equals
    # B + B^T.  (v x*) acts on rows of I and (v x) on columns, so each gets a
    # branch-free pass of its own.
    w0, w1, w2 = v[0], v[1], v[2]
    u0, u1, u2 = v[3], v[4], v[5]
    if kind == KIND_SIMPLE:
        for c in range(6):
            a0 = I[0, c]
            a1 = I[1, c]
            a2 = I[2, c]
            b0 = I[3, c]
            b1 = I[4, c]
            b2 = I[5, c]
            B[0, c] = w1 * a2 - w2 * a1 + u1 * b2 - u2 * b1
            B[1, c] = w2 * a0 - w0 * a2 + u2 * b0 - u0 * b2
            B[2, c] = w0 * a1 - w1 * a0 + u0 * b1 - u1 * b0
            B[3, c] = w1 * b2 - w2 * b1
            B[4, c] = w2 * b0 - w0 * b2
            B[5, c] = w0 * b1 - w1 * b0
        return
    h0 = 0.0
    h1 = 0.0
    h2 = 0.0
    h3 = 0.0
    h4 = 0.0
    h5 = 0.0
    # row pass: B <- -I (v x), plus h = I v on the side
    for r in range(6):
        i0 = I[r, 0]
        i1 = I[r, 1]
        i2 = I[r, 2]
        i3 = I[r, 3]
        i4 = I[r, 4]
        i5 = I[r, 5]
        hr = i0 * w0 + i1 * w1 + i2 * w2 + i3 * u0 + i4 * u1 + i5 * u2
        if r == 0:
            h0 = hr
        elif r == 1:
            h1 = hr
        elif r == 2:
            h2 = hr
        elif r == 3:
            h3 = hr
        elif r == 4:
            h4 = hr
        else:
            h5 = hr
        B[r, 0] = -(i1 * w2 - i2 * w1 + i4 * u2 - i5 * u1)
        B[r, 1] = -(i2 * w0 - i0 * w2 + i5 * u0 - i3 * u2)
        B[r, 2] = -(i0 * w1 - i1 * w0 + i3 * u1 - i4 * u0)
        B[r, 3] = -(i4 * w2 - i5 * w1)
        B[r, 4] = -(i5 * w0 - i3 * w2)
        B[r, 5] = -(i3 * w1 - i4 * w0)
    # column pass: B += (v x*) I
    for c in range(6):
        a0 = I[0, c]
        a1 = I[1, c]
        a2 = I[2, c]
        b0 = I[3, c]
        b1 = I[4, c]
        b2 = I[5, c]
        B[0, c] += w1 * a2 - w2 * a1 + u1 * b2 - u2 * b1
        B[1, c] += w2 * a0 - w0 * a2 + u2 * b0 - u0 * b2
        B[2, c] += w0 * a1 - w1 * a0 + u0 * b1 - u1 * b0
        B[3, c] += w1 * b2 - w2 * b1
        B[4, c] += w2 * b0 - w0 * b2
        B[5, c] += w0 * b1 - w1 * b0
    # add N(h), the operator with N(h) v = (v x*) h, then halve
    B[0, 1] += h2
    B[0, 2] -= h1
    B[1, 0] -= h2
    B[1, 2] += h0
    B[2, 0] += h1
    B[2, 1] -= h0
    B[0, 4] += h5
    B[0, 5] -= h4
    B[1, 3] -= h5
    B[1, 5] += h3
    B[2, 3] += h4
    B[2, 4] -= h3
    B[3, 1] += h5
    B[3, 2] -= h4
    B[4, 0] -= h5
    B[4, 2] += h3
    B[5, 0] += h4
    B[5, 1] -= h3
    for r in range(6):
        for c in range(6):
            B[r, c] *= 0.5


@njit(inline="always")
def _factorization_body(v, I, B):
    # Symmetric-rate factor for a rigid-body (non-composite) inertia
    # I = [[J, S(cb)], [S(cb)^T, m E]].  The right half of B vanishes
    # identically: with h_lin = m u - cb x w the top-right block
    # (S(w x cb) + m S(u) - S(h_lin)) / 2 cancels, and the bottom-right is
    # m S(w) - m S(w).  What is left:
    #   TL = (K + K^T - cb u^T - u cb^T + 2 (u . cb) E - S(J w + cb x u)) / 2
    #   BL = -S(w x cb + m u),         with K = S(w) J.
    w0, w1, w2 = v[0], v[1], v[2]
    u0, u1, u2 = v[3], v[4], v[5]
    j00 = I[0, 0]
    j01 = I[0, 1]
    j02 = I[0, 2]
    j11 = I[1, 1]
    j12 = I[1, 2]
    j22 = I[2, 2]
    c0 = I[2, 4]
    c1 = I[0, 5]
    c2 = I[1, 3]
    m = I[3, 3]
    # K = S(w) J (J symmetric)
    k00 = w1 * j02 - w2 * j01
    k01 = w1 * j12 - w2 * j11
    k02 = w1 * j22 - w2 * j12
    k10 = w2 * j00 - w0 * j02
    k11 = w2 * j01 - w0 * j12
    k12 = w2 * j02 - w0 * j22
    k20 = w0 * j01 - w1 * j00
    k21 = w0 * j11 - w1 * j01
    k22 = w0 * j12 - w1 * j02
    # h_a = J w + cb x u
    a0 = j00 * w0 + j01 * w1 + j02 * w2 + c1 * u2 - c2 * u1
    a1 = j01 * w0 + j11 * w1 + j12 * w2 + c2 * u0 - c0 * u2
    a2 = j02 * w0 + j12 * w1 + j22 * w2 + c0 * u1 - c1 * u0
    dc = u0 * c0 + u1 * c1 + u2 * c2
    B[0, 0] = k00 - c0 * u0 + dc
    B[1, 1] = k11 - c1 * u1 + dc
    B[2, 2] = k22 - c2 * u2 + dc
    B[0, 1] = 0.5 * (k01 + k10 - c0 * u1 - u0 * c1 + a2)
    B[1, 0] = 0.5 * (k01 + k10 - c0 * u1 - u0 * c1 - a2)
    B[0, 2] = 0.5 * (k02 + k20 - c0 * u2 - u0 * c2 - a1)
    B[2, 0] = 0.5 * (k02 + k20 - c0 * u2 - u0 * c2 + a1)
    B[1, 2] = 0.5 * (k12 + k21 - c1 * u2 - u1 * c2 + a0)
    B[2, 1] = 0.5 * (k12 + k21 - c1 * u2 - u1 * c2 - a0)
    # BL = -S(z), z = w x cb + m u
    z0 = w1 * c2 - w2 * c1 + m * u0
    z1 = w2 * c0 - w0 * c2 + m * u1
    z2 = w0 * c1 - w1 * c0 + m * u2
    B[3, 0] = 0.0
    B[3, 1] = z2
    B[3, 2] = -z1
    B[4, 0] = -z2
    B[4, 1] = 0.0
    B[4, 2] = z0
    B[5, 0] = z1
    B[5, 1] = -z0
    B[5, 2] = 0.0
    for r in range(6):
        B[r, 3] = 0.0
        B[r, 4] = 0.0
        B[r, 5] = 0.0


@njit(inline="always")
def _congruence_block(X, A, T, out, accumulate):
    # out (+)= X^T A X using the block structure X = [[R, 0], [G, R]], with
    # the blocks held in registers.  T = A X first:
    # T[:, 0:3] = A[:, 0:3] R + A[:, 3:6] G, T[:, 3:6] = A[:, 3:6] R.
    r00 = X[0, 0]
    r01 = X[0, 1]
    r02 = X[0, 2]
    r10 = X[1, 0]
    r11 = X[1, 1]
    r12 = X[1, 2]
    r20 = X[2, 0]
    r21 = X[2, 1]
    r22 = X[2, 2]
    g00 = X[3, 0]
    g01 = X[3, 1]
    g02 = X[3, 2]
    g10 = X[4, 0]
    g11 = X[4, 1]
    g12 = X[4, 2]
    g20 = X[5, 0]
    g21 = X[5, 1]
    g22 = X[5, 2]
    for r in range(6):
        a0 = A[r, 0]
        a1 = A[r, 1]
        a2 = A[r, 2]
        b0 = A[r, 3]
        b1 = A[r, 4]
        b2 = A[r, 5]
        T[r, 0] = a0 * r00 + a1 * r10 + a2 * r20 + b0 * g00 + b1 * g10 + b2 * g20
        T[r, 1] = a0 * r01 + a1 * r11 + a2 * r21 + b0 * g01 + b1 * g11 + b2 * g21
        T[r, 2] = a0 * r02 + a1 * r12 + a2 * r22 + b0 * g02 + b1 * g12 + b2 * g22
        T[r, 3] = b0 * r00 + b1 * r10 + b2 * r20
        T[r, 4] = b0 * r01 + b1 * r11 + b2 * r21
        T[r, 5] = b0 * r02 + b1 * r12 + b2 * r22
    # out = X^T T: rows 0:3 get R^T T[0:3] + G^T T[3:6]; rows 3:6 get R^T T[3:6].
    for c in range(6):
        t0 = T[0, c]
        t1 = T[1, c]
        t2 = T[2, c]
        u0 = T[3, c]
        u1 = T[4, c]
        u2 = T[5, c]
        if accumulate:
            out[0, c] += r00 * t0 + r10 * t1 + r20 * t2 + g00 * u0 + g10 * u1 + g20 * u2
            out[1, c] += r01 * t0 + r11 * t1 + r21 * t2 + g01 * u0 + g11 * u1 + g21 * u2
            out[2, c] += r02 * t0 + r12 * t1 + r22 * t2 + g02 * u0 + g12 * u1 + g22 * u2
            out[3, c] += r00 * u0 + r10 * u1 + r20 * u2
            out[4, c] += r01 * u0 + r11 * u1 + r21 * u2
            out[5, c] += r02 * u0 + r12 * u1 + r22 * u2
        else:
            out[0, c] = r00 * t0 + r10 * t1 + r20 * t2 + g00 * u0 + g10 * u1 + g20 * u2
            out[1, c] = r01 * t0 + r11 * t1 + r21 * t2 + g01 * u0 + g11 * u1 + g21 * u2
            out[2, c] = r02 * t0 + r12 * t1 + r22 * t2 + g02 * u0 + g12 * u1 + g22 * u2
            out[3, c] = r00 * u0 + r10 * u1 + r20 * u2
            out[4, c] = r01 * u0 + r11 * u1 + r21 * u2
            out[5, c] = r02 * u0 + r12 * u1 + r22 * u2


@njit(inline="always")
def _transform_force_cols(Xi, F, Ft):
    # F <- Xi^T F for stacked force columns held in F[:, 0:3]
    for c in range(3):
        for r in range(6):
            s = 0.0
            for k in range(6):
                s += Xi[k, r] * F[k, c]
            Ft[r, c] = s
    for c in range(3):
        for r in range(6):
            F[r, c] = Ft[r, c]


@njit(cache=True)
def coriolis_kernel(ints, geom, inertia6, q, qd, kind, mats, vecs, outs):
    """One pass of the recursive Coriolis/mass computation.

    Forward sweep: joint transforms, body velocities, subspace rates, and
    body-level rate factors.  Backward sweep: composite inertias and rate
    matrices, with stacked force columns F1, F2, F3 walked up the ancestor
    chain to fill C, M, and dM/dt in place.

    Only entries of supported (related) pairs are written; outs must arrive
    zeroed wherever the tree has no path between bodies.

    mats rows: X[0:n], IC[n:2n], BC[2n:3n], T, F, Ft.
    vecs rows: phi[0:n], phidot[n:2n], v[2n:3n].
    outs: (3, n, n) holding M, dM/dt, C.
    """
    n = q.shape[0]
    _fk(ints, geom, q, mats, vecs)
    X = mats[0:n]
    IC = mats[n:2 * n]
    BC = mats[2 * n:3 * n]
    T = mats[3 * n]
    F = mats[3 * n + 1]
    Ft = mats[3 * n + 2]
    phi = vecs[0:n]
    phidot = vecs[n:2 * n]
    v = vecs[2 * n:3 * n]
    M = outs[0]
    Mdot = outs[1]
    C = outs[2]

    for i in range(n):
        pa = ints[i, 0]
        for r in range(6):
            s = phi[i, r] * qd[i]
            if pa >= 0:
                for c in range(6):
                    s += X[i, r, c] * v[pa, c]
            v[i, r] = s
        _cross_motion_apply(v[i], phi[i], phidot[i])
        for r in range(6):
            for c in range(6):
                IC[i, r, c] = inertia6[i, r, c]
        if kind == KIND_NS:
            _factorization_body(v[i], inertia6[i], BC[i])
        else:
            _factorization(kind, v[i], inertia6[i], BC[i])

    for j in range(n - 1, -1, -1):
        for r in range(6):
            f1 = 0.0
            f2 = 0.0
            f3 = 0.0
            for c in range(6):
                f1 += IC[j, r, c] * phidot[j, c] + BC[j, r, c] * phi[j, c]
                f2 += IC[j, r, c] * phi[j, c]
                f3 += BC[j, c, r] * phi[j, c]
            F[r, 0] = f1
            F[r, 1] = f2
            F[r, 2] = f3
        cjj = 0.0
        mjj = 0.0
        mdjj = 0.0
        for r in range(6):
            cjj += phi[j, r] * F[r, 0]
            mjj += phi[j, r] * F[r, 1]
            mdjj += phidot[j, r] * F[r, 1] + phi[j, r] * (F[r, 0] + F[r, 2])
        C[j, j] = cjj
        M[j, j] = mjj
        Mdot[j, j] = mdjj

        i = j
        while ints[i, 0] >= 0:
            _transform_force_cols(X[i], F, Ft)
            i = ints[i, 0]
            cij = 0.0
            cji = 0.0
            mij = 0.0
            mdij = 0.0
            for r in range(6):
                cij += phi[i, r] * F[r, 0]
                cji += phidot[i, r] * F[r, 1] + phi[i, r] * F[r, 2]
                mij += phi[i, r] * F[r, 1]
                mdij += phidot[i, r] * F[r, 1] + phi[i, r] * (F[r, 0] + F[r, 2])
            C[i, j] = cij
            C[j, i] = cji
            M[i, j] = mij
            M[j, i] = mij
            Mdot[i, j] = mdij
            Mdot[j, i] = mdij

        pj = ints[j, 0]
        if pj >= 0:
            _congruence_block(X[j], IC[j], T, IC[pj], True)
            _congruence_block(X[j], BC[j], T, BC[pj], True)


@njit(cache=True)
def christoffel_kernel(ints, geom, inertia6, q, mats, vecs, Gamma):
    """Recursive evaluation of all Christoffel symbols of the first kind.

    For each body k the symmetric-rate factor of the composite subtree
    inertia is propagated down the ancestor chain, and three stacked force
    columns fill the six symbol orderings of every supported (i, j) pair in
    place.  Entries off the relatedness pattern are never touched, so Gamma
    must arrive zeroed there.

    mats rows: X[0:n], IC[n:2n], Btil, D, T, F, Ft.
    vecs rows: phi[0:n], w.
    """
    n = q.shape[0]
    _fk(ints, geom, q, mats, vecs)
    X = mats[0:n]
    IC = mats[n:2 * n]
    Btil = mats[2 * n]
    D = mats[2 * n + 1]
    T = mats[2 * n + 2]
    F = mats[2 * n + 3]
    Ft = mats[2 * n + 4]
    phi = vecs[0:n]
    w = vecs[n]

    for i in range(n):
        for r in range(6):
            for c in range(6):
                IC[i, r, c] = inertia6[i, r, c]

    for k in range(n - 1, -1, -1):
        _factorization(KIND_NS, phi[k], IC[k], Btil)
        _mat6_vec(IC[k], phi[k], w)
        # D = N(IC_k phi_k) - Btil, with N(f) v = (v x*) f
        for r in range(6):
            for c in range(6):
                D[r, c] = -Btil[r, c]
        D[0, 1] += w[2]
        D[0, 2] -= w[1]
        D[1, 0] -= w[2]
        D[1, 2] += w[0]
        D[2, 0] += w[1]
        D[2, 1] -= w[0]
        D[0, 4] += w[5]
        D[0, 5] -= w[4]
        D[1, 3] -= w[5]
        D[1, 5] += w[3]
        D[2, 3] += w[4]
        D[2, 4] -= w[3]
        D[3, 1] += w[5]
        D[3, 2] -= w[4]
        D[4, 0] -= w[5]
        D[4, 2] += w[3]
        D[5, 0] += w[4]
        D[5, 1] -= w[3]

        j = k
        while True:
            for r in range(6):
                f1 = 0.0
                f2 = 0.0
                f3 = 0.0
                for c in range(6):
                    f1 += Btil[r, c] * phi[j, c]
                    f2 += Btil[c, r] * phi[j, c]
                    f3 += D[r, c] * phi[j, c]
                F[r, 0] = f1
                F[r, 1] = f2
                F[r, 2] = f3

            i = j
            while True:
                g1 = 0.0
                g2 = 0.0
                g3 = 0.0
                for r in range(6):
                    g1 += phi[i, r] * F[r, 0]
                    g2 += phi[i, r] * F[r, 1]
                    g3 += phi[i, r] * F[r, 2]
                Gamma[i, j, k] = g1
                Gamma[i, k, j] = g1
                Gamma[j, i, k] = g2
                Gamma[j, k, i] = g2
                Gamma[k, i, j] = g3
                Gamma[k, j, i] = g3
                if ints[i, 0] < 0:
                    break
                _transform_force_cols(X[i], F, Ft)
                i = ints[i, 0]

            if ints[j, 0] < 0:
                break
            _congruence_block(X[j], Btil, T, Btil, False)
            _congruence_block(X[j], D, T, D, False)
            j = ints[j, 0]

        pk = ints[k, 0]
        if pk >= 0:
            _congruence_block(X[k], IC[k], T, IC[pk], True)


@njit(cache=True)
def crba_kernel(ints, geom, inertia6, q, mats, vecs, M):
    """Composite-rigid-body mass matrix (independent of the Coriolis sweep).

    M must arrive zeroed for unrelated pairs; related entries are written.
    mats rows: X[0:n], IC[n:2n], T.  vecs rows: phi[0:n], F, Ft.
    """
    n = q.shape[0]
    _fk(ints, geom, q, mats, vecs)
    X = mats[0:n]
    IC = mats[n:2 * n]
    T = mats[2 * n]
    phi = vecs[0:n]
    F = vecs[n]
    Ft = vecs[n + 1]

    for i in range(n):
        for r in range(6):
            for c in range(6):
                IC[i, r, c] = inertia6[i, r, c]

    for i in range(n - 1, -1, -1):
        pa = ints[i, 0]
        if pa >= 0:
            _congruence_block(X[i], IC[i], T, IC[pa], True)
        _mat6_vec(IC[i], phi[i], F)
        mii = 0.0
        for r in range(6):
            mii += phi[i, r] * F[r]
        M[i, i] = mii
        j = i
        while ints[j, 0] >= 0:
            for r in range(6):
                s = 0.0
                for k in range(6):
                    s += X[j, k, r] * F[k]
                Ft[r] = s
            for r in range(6):
                F[r] = Ft[r]
            j = ints[j, 0]
            mij = 0.0
            for r in range(6):
                mij += F[r] * phi[j, r]
            M[i, j] = mij
            M[j, i] = mij


@njit(cache=True)
def rnea_kernel(ints, geom, inertia6, q, qd, qdd, a_base, mats, vecs, tau):
    """Inverse dynamics: joint torques for the given motion.

    a_base is the spatial acceleration of the fixed base; passing the
    negated gravitational acceleration there folds gravity into the result.
    mats rows: X[0:n].  vecs rows: phi[0:n], v[n:2n], a[2n:3n], f[3n:4n], w.
    """
    n = q.shape[0]
    _fk(ints, geom, q, mats, vecs)
    X = mats[0:n]
    phi = vecs[0:n]
    v = vecs[n:2 * n]
    a = vecs[2 * n:3 * n]
    f = vecs[3 * n:4 * n]
    w = vecs[4 * n]

    for i in range(n):
        pa = ints[i, 0]
        for r in range(6):
            sv = phi[i, r] * qd[i]
            sa = phi[i, r] * qdd[i]
            if pa >= 0:
                for c in range(6):
                    sv += X[i, r, c] * v[pa, c]
                    sa += X[i, r, c] * a[pa, c]
            else:
                for c in range(6):
                    sa += X[i, r, c] * a_base[c]
            v[i, r] = sv
            a[i, r] = sa
        # velocity-product acceleration: (v x) phi qd, accumulated via f as scratch
        for r in range(6):
            w[r] = phi[i, r] * qd[i]
        _cross_motion_apply(v[i], w, f[i])
        for r in range(6):
            a[i, r] += f[i, r]
        # net body force: I a + (v x*) I v
        _mat6_vec(inertia6[i], v[i], w)
        _mat6_vec(inertia6[i], a[i], f[i])
        _cross_force_add(v[i], w, f[i])

    for i in range(n - 1, -1, -1):
        s = 0.0
        for r in range(6):
            s += phi[i, r] * f[i, r]
        tau[i] = s
        pa = ints[i, 0]
        if pa >= 0:
            for r in range(6):
                s = 0.0
                for k in range(6):
                    s += X[i, k, r] * f[i, k]
                f[pa, r] += s


# ---------------------------------------------------------------------------
# Batched sweeps for timing: iterate pre-sampled trial states inside one
# compiled call so the measured region is the algorithm alone, free of
# per-call interpreter and boxing costs.

@njit(cache=True)
def coriolis_bench(ints, geom, inertia6, q_all, qd_all, kind, mats, vecs, outs):
    for t in range(q_all.shape[0]):
        coriolis_kernel(ints, geom, inertia6, q_all[t], qd_all[t], kind, mats, vecs, outs)


@njit(cache=True)
def christoffel_bench(ints, geom, inertia6, q_all, mats, vecs, Gamma):
    for t in range(q_all.shape[0]):
        christoffel_kernel(ints, geom, inertia6, q_all[t], mats, vecs, Gamma)


@njit(cache=True)
def crba_bench(ints, geom, inertia6, q_all, mats, vecs, M):
    for t in range(q_all.shape[0]):
        crba_kernel(ints, geom, inertia6, q_all[t], mats, vecs, M)


@njit(cache=True)
def rnea_bench(ints, geom, inertia6, q_all, qd_all, qdd_all, a_base, mats, vecs, tau):
    for t in range(q_all.shape[0]):
        rnea_kernel(ints, geom, inertia6, q_all[t], qd_all[t], qdd_all[t], a_base, mats, vecs, tau)
