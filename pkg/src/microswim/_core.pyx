# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled mirrors of the kernels in microswim._purepy.

Same conventions, same results to solver precision; see _purepy for the
reference implementation and the package README for the geometry table.
"""

from libc.math cimport cos, fabs, sin

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef inline void _base_to_link(double theta, double phi, double r[3][3]) noexcept nogil:
    cdef double ct = cos(theta)
    cdef double st = sin(theta)
    cdef double cp = cos(phi)
    cdef double sp = sin(phi)
    r[0][0] = cp * ct; r[0][1] = cp * st; r[0][2] = -sp
    r[1][0] = -st;     r[1][1] = ct;      r[1][2] = 0.0
    r[2][0] = sp * ct; r[2][1] = sp * st; r[2][2] = cp


cdef inline void _hat(const double v[3], double m[3][3]) noexcept nogil:
    m[0][0] = 0.0;   m[0][1] = -v[2]; m[0][2] = v[1]
    m[1][0] = v[2];  m[1][1] = 0.0;   m[1][2] = -v[0]
    m[2][0] = -v[1]; m[2][1] = v[0];  m[2][2] = 0.0


cdef inline void _drag_diagonal(double length, double c_long, double c_lat,
                                double c_spin, double h[6]) noexcept nogil:
    h[0] = 2.0 * length * c_long
    h[1] = 2.0 * length * c_lat
    h[2] = 2.0 * length * c_lat
    h[3] = 2.0 * length * c_spin
    h[4] = (2.0 / 3.0) * length * length * length * c_lat
    h[5] = h[4]


cdef int _solve6(double a[6][6], double b[6][4]) noexcept nogil:
    """Row-pivoted Gaussian elimination, 4 right-hand sides in place."""
    cdef int i, j, k, piv
    cdef double best, factor, tmp
    for k in range(6):
        piv = k
        best = fabs(a[k][k])
        for i in range(k + 1, 6):
            if fabs(a[i][k]) > best:
                best = fabs(a[i][k])
                piv = i
        if best == 0.0:
            return -1
        if piv != k:
            for j in range(6):
                tmp = a[k][j]; a[k][j] = a[piv][j]; a[piv][j] = tmp
            for j in range(4):
                tmp = b[k][j]; b[k][j] = b[piv][j]; b[piv][j] = tmp
        for i in range(k + 1, 6):
            factor = a[i][k] / a[k][k]
            if factor != 0.0:
                for j in range(k, 6):
                    a[i][j] -= factor * a[k][j]
                for j in range(4):
                    b[i][j] -= factor * b[k][j]
    for k in range(5, -1, -1):
        for j in range(4):
            tmp = b[k][j]
            for i in range(k + 1, 6):
                tmp -= a[k][i] * b[i][j]
            b[k][j] = tmp / a[k][k]
    return 0


def connection_restricted(double theta1, double phi1, double theta2, double phi2,
                          double half_length, double c_long, double c_lat,
                          double c_spin):
    """Local connection A (6x4); see _purepy.connection_restricted."""
    cdef double h[6]
    cdef double p_mat[6][6]
    cdef double q_mat[6][4]
    cdef double r_pass[3][3]
    cdef double center[3]
    cdef double d_link[3]
    cdef double hat_c[3][3]
    cdef double hat_d[3][3]
    cdef double w_cols[3][2]
    cdef double b[6][8]
    cdef double t[6][6]
    cdef double thb[6][8]
    cdef double sgn, theta, phi, acc
    cdef int link, i, j, k, qcol

    _drag_diagonal(half_length, c_long, c_lat, c_spin, h)
    for i in range(6):
        for j in range(6):
            p_mat[i][j] = h[i] if i == j else 0.0
        for j in range(4):
            q_mat[i][j] = 0.0

    for link in range(2):
        if link == 0:
            sgn = 1.0; theta = theta1; phi = phi1; qcol = 0
        else:
            sgn = -1.0; theta = theta2; phi = phi2; qcol = 2
        _base_to_link(theta, phi, r_pass)
        d_link[0] = sgn * half_length; d_link[1] = 0.0; d_link[2] = 0.0
        # center = joint + R^T d_link
        for i in range(3):
            center[i] = r_pass[0][i] * d_link[0]
        center[0] += sgn * half_length
        _hat(center, hat_c)
        _hat(d_link, hat_d)
        w_cols[0][0] = -sin(phi); w_cols[0][1] = 0.0
        w_cols[1][0] = 0.0;       w_cols[1][1] = 1.0
        w_cols[2][0] = cos(phi);  w_cols[2][1] = 0.0

        for i in range(6):
            for j in range(8):
                b[i][j] = 0.0
        for i in range(3):
            for j in range(3):
                b[i][j] = r_pass[i][j]
                b[3 + i][3 + j] = r_pass[i][j]
                # -R_pass @ hat(center)
                acc = 0.0
                for k in range(3):
                    acc += r_pass[i][k] * hat_c[k][j]
                b[i][3 + j] = -acc
            for j in range(2):
                acc = 0.0
                for k in range(3):
                    acc += hat_d[i][k] * w_cols[k][j]
                b[i][6 + j] = -acc
                b[3 + i][6 + j] = w_cols[i][j]

        for i in range(6):
            for j in range(6):
                t[i][j] = 0.0
        for i in range(3):
            for j in range(3):
                t[i][j] = r_pass[j][i]          # A_act = R_pass^T
                t[3 + i][3 + j] = r_pass[j][i]
                acc = 0.0
                for k in range(3):
                    acc += hat_c[i][k] * r_pass[j][k]
                t[3 + i][j] = acc

        for i in range(6):
            for j in range(8):
                acc = 0.0
                for k in range(6):
                    acc += t[i][k] * h[k] * b[k][j]
                thb[i][j] = acc
        for i in range(6):
            for j in range(6):
                p_mat[i][j] += thb[i][j]
            for j in range(2):
                q_mat[i][qcol + j] += thb[i][6 + j]

    if _solve6(p_mat, q_mat) != 0:
        raise np.linalg.LinAlgError("singular resistance matrix")
    out = np.empty((6, 4))
    cdef double[:, ::1] out_view = out
    for i in range(6):
        for j in range(4):
            out_view[i, j] = q_mat[i][j]
    return out


def oracle_resistance(double theta1, double phi1, double theta2, double phi2,
                      double half_length, double c_long, double c_lat,
                      double c_spin, int segments):
    """Discretized-rod resistance (P, Q); see _purepy.oracle_resistance."""
    if segments < 10:
        raise ValueError(f"need at least 10 segments per link, got {segments}")

    cdef double g_arr[6][10]
    cdef double r_pass[3][3]
    cdef double tangent[3]
    cdef double joint[3]
    cdef double center[3]
    cdef double axes[3][2]
    cdef double proj[3][3]
    cdef double pos[3]
    cdef double lever[3]
    cdef double vcol[3]
    cdef double fcol[3]
    cdef double wjac_t[10]
    cdef double step_len, tau, sgn, theta, phi, acc, spin_total
    cdef int link, i, j, k, seg, col, n

    n = segments
    step_len = 2.0 * half_length / n
    for i in range(6):
        for j in range(10):
            g_arr[i][j] = 0.0

    for link in range(3):
        if link == 0:
            tangent[0] = 1.0; tangent[1] = 0.0; tangent[2] = 0.0
            joint[0] = 0.0; joint[1] = 0.0; joint[2] = 0.0
            center[0] = 0.0; center[1] = 0.0; center[2] = 0.0
            col = -1
        else:
            if link == 1:
                sgn = 1.0; theta = theta1; phi = phi1; col = 6
            else:
                sgn = -1.0; theta = theta2; phi = phi2; col = 8
            _base_to_link(theta, phi, r_pass)
            for i in range(3):
                tangent[i] = r_pass[0][i]       # first row of R = R^T e1
            joint[0] = sgn * half_length; joint[1] = 0.0; joint[2] = 0.0
            for i in range(3):
                center[i] = joint[i] + sgn * half_length * tangent[i]
            axes[0][0] = 0.0; axes[0][1] = -sin(theta)
            axes[1][0] = 0.0; axes[1][1] = cos(theta)
            axes[2][0] = 1.0; axes[2][1] = 0.0

        for i in range(3):
            for j in range(3):
                proj[i][j] = (c_long - c_lat) * tangent[i] * tangent[j]
            proj[i][i] += c_lat

        for seg in range(n):
            tau = -half_length + (seg + 0.5) * step_len
            for i in range(3):
                pos[i] = center[i] + tau * tangent[i]
                lever[i] = pos[i] - joint[i]
            # columns of the segment velocity map, then force and moment
            for k in range(10):
                if k < 3:
                    vcol[0] = 1.0 if k == 0 else 0.0
                    vcol[1] = 1.0 if k == 1 else 0.0
                    vcol[2] = 1.0 if k == 2 else 0.0
                elif k < 6:
                    # w x p for w = e_{k-3}
                    j = k - 3
                    vcol[0] = 0.0; vcol[1] = 0.0; vcol[2] = 0.0
                    if j == 0:
                        vcol[1] = -pos[2]; vcol[2] = pos[1]
                    elif j == 1:
                        vcol[0] = pos[2]; vcol[2] = -pos[0]
                    else:
                        vcol[0] = -pos[1]; vcol[1] = pos[0]
                elif col >= 0 and (k == col or k == col + 1):
                    j = k - col
                    # axes[:, j] x lever
                    vcol[0] = axes[1][j] * lever[2] - axes[2][j] * lever[1]
                    vcol[1] = axes[2][j] * lever[0] - axes[0][j] * lever[2]
                    vcol[2] = axes[0][j] * lever[1] - axes[1][j] * lever[0]
                else:
                    continue
                for i in range(3):
                    fcol[i] = step_len * (
                        proj[i][0] * vcol[0] + proj[i][1] * vcol[1] + proj[i][2] * vcol[2]
                    )
                g_arr[0][k] += fcol[0]
                g_arr[1][k] += fcol[1]
                g_arr[2][k] += fcol[2]
                g_arr[3][k] += pos[1] * fcol[2] - pos[2] * fcol[1]
                g_arr[4][k] += pos[2] * fcol[0] - pos[0] * fcol[2]
                g_arr[5][k] += pos[0] * fcol[1] - pos[1] * fcol[0]

        # spin drag about the link axis, integrated exactly over the link
        for k in range(10):
            wjac_t[k] = 0.0
        for j in range(3):
            wjac_t[3 + j] = tangent[j]
        if col >= 0:
            for j in range(2):
                wjac_t[col + j] = (
                    tangent[0] * axes[0][j]
                    + tangent[1] * axes[1][j]
                    + tangent[2] * axes[2][j]
                )
        spin_total = 2.0 * half_length * c_spin
        for k in range(10):
            if wjac_t[k] != 0.0:
                for i in range(3):
                    g_arr[3 + i][k] += spin_total * tangent[i] * wjac_t[k]

    p_out = np.empty((6, 6))
    q_out = np.empty((6, 4))
    cdef double[:, ::1] p_view = p_out
    cdef double[:, ::1] q_view = q_out
    for i in range(6):
        for j in range(6):
            p_view[i, j] = g_arr[i][j]
        for j in range(4):
            q_view[i, j] = g_arr[i][6 + j]
    return p_out, q_out
