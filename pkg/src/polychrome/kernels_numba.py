"""Numba kernels for the O(n^3)-scale range enumeration over int64 coordinates.

The square lane enumerates realized ranges of axis-parallel squares with a
per-generator sliding window: for each ordered pair (a, c) with xs[a] < xs[c]
the generator fixes side s = xs[c] - xs[a], and the realized subsets whose
x-extremes are exactly {a, c} are windows over the y-sorted points with x in
[xs[a], xs[c]].  Together with the symmetric tall pass and singletons this
enumerates every realized subset exactly once (coordinate conditioning
guarantees no subset has equal width and height).

The triangle lane enumerates side-offset triples drawn from per-side dot
thresholds; a candidate is kept iff its offsets equal the componentwise
maxima of its own subset, which makes it the unique canonical candidate.

All arithmetic is int64 on pre-scaled exact integer coordinates; callers
guarantee the magnitudes leave headroom (see backend.scale_for_kernels).
"""

import numpy as np
from numba import njit

# reference-triangle side normals: n1=(-2,1), n2=(2,1), n3=(0,-2)
# alpha = (c1 + c2 + c3) / 4 for the homothet with side offsets (c1,c2,c3)


@njit(cache=True)
def _grow64(arr, used, extra):
    if used + extra <= arr.shape[0]:
        return arr
    cap = arr.shape[0]
    while cap < used + extra:
        cap *= 2
    out = np.empty(cap, dtype=np.int64)
    out[:used] = arr[:used]
    return out


@njit(cache=True)
def sq_collect(xs, ys, ox, oy):
    """All realized multi-point square ranges; returns (members, offsets).

    members is a flat int64 array of point indices; range r spans
    members[offsets[r]:offsets[r+1]].
    """
    n = xs.shape[0]
    members = np.empty(1024, dtype=np.int64)
    offsets = np.empty(1024, dtype=np.int64)
    m_used = 0
    r_used = 0
    offsets[0] = 0
    tid = np.empty(n, dtype=np.int64)
    tv = np.empty(n, dtype=np.int64)
    for axis in range(2):
        if axis == 0:
            main = xs
            other = ys
            order_main = ox
            order_other = oy
        else:
            main = ys
            other = xs
            order_main = oy
            order_other = ox
        for ia in range(n):
            a = order_main[ia]
            for ic in range(ia + 1, n):
                c = order_main[ic]
                s = main[c] - main[a]
                # build T: points with main coord in [main[a], main[c]], in
                # increasing order of the other coordinate
                t = 0
                pos_a = -1
                pos_c = -1
                for kk in range(n):
                    p = order_other[kk]
                    if main[p] >= main[a] and main[p] <= main[c]:
                        tid[t] = p
                        tv[t] = other[p]
                        if p == a:
                            pos_a = t
                        elif p == c:
                            pos_c = t
                        t += 1
                lo_pos = pos_a if pos_a < pos_c else pos_c
                hi_pos = pos_c if pos_a < pos_c else pos_a
                jmax_prev = -1
                j = 0
                for i in range(t):
                    if i > lo_pos:
                        break
                    if j < i:
                        j = i
                    while j + 1 < t and tv[j + 1] - tv[i] <= s:
                        j += 1
                    jlo = i
                    if jmax_prev > jlo:
                        jlo = jmax_prev
                    if jlo < hi_pos:
                        jlo = hi_pos
                    for jj in range(jlo, j + 1):
                        size = jj - i + 1
                        members = _grow64(members, m_used, size)
                        for q in range(i, jj + 1):
                            members[m_used] = tid[q]
                            m_used += 1
                        offsets = _grow64(offsets, r_used + 1, 1)
                        r_used += 1
                        offsets[r_used] = m_used
                    jmax_prev = j
    return members[:m_used].copy(), offsets[: r_used + 1].copy()


@njit(cache=True)
def sq_pairs(xs, ys, ox, oy):
    """Realized two-point square ranges (the generalized Delaunay edges)."""
    n = xs.shape[0]
    out = np.empty(2048, dtype=np.int64)
    used = 0
    tv = np.empty(n, dtype=np.int64)
    tid = np.empty(n, dtype=np.int64)
    for axis in range(2):
        if axis == 0:
            main, other, order_main, order_other = xs, ys, ox, oy
        else:
            main, other, order_main, order_other = ys, xs, oy, ox
        for ia in range(n):
            a = order_main[ia]
            for ic in range(ia + 1, n):
                c = order_main[ic]
                s = main[c] - main[a]
                if other[c] - other[a] > s or other[a] - other[c] > s:
                    continue
                t = 0
                pos_a = -1
                pos_c = -1
                for kk in range(n):
                    p = order_other[kk]
                    if main[p] >= main[a] and main[p] <= main[c]:
                        tid[t] = p
                        tv[t] = other[p]
                        if p == a:
                            pos_a = t
                        elif p == c:
                            pos_c = t
                        t += 1
                i = pos_a if pos_a < pos_c else pos_c
                j = pos_c if pos_a < pos_c else pos_a
                if j != i + 1:
                    continue
                # realized iff some window [b, b+s] contains exactly T[i..j]
                if tv[j] - tv[i] > s:
                    continue
                ok = True
                if i > 0 and j < t - 1:
                    if tv[j + 1] - tv[i - 1] <= s:
                        ok = False
                if ok:
                    if used + 2 > out.shape[0]:
                        out = _grow64(out, used, 2)
                    out[used] = a
                    out[used + 1] = c
                    used += 2
    return out[:used].copy().reshape(-1, 2)


@njit(cache=True)
def sq_sized_mono(xs, ys, ox, oy, cat, size_want):
    """Ranges with exactly size_want points, monochromatic in cat (uint8).

    Returns (members, offsets).  Used for heavy-monochromatic detection.
    """
    n = xs.shape[0]
    members = np.empty(1024, dtype=np.int64)
    offsets = np.empty(256, dtype=np.int64)
    m_used = 0
    r_used = 0
    offsets[0] = 0
    tid = np.empty(n, dtype=np.int64)
    tv = np.empty(n, dtype=np.int64)
    pref = np.empty(n + 1, dtype=np.int64)
    for axis in range(2):
        if axis == 0:
            main, other, order_main, order_other = xs, ys, ox, oy
        else:
            main, other, order_main, order_other = ys, xs, oy, ox
        for ia in range(n):
            a = order_main[ia]
            for ic in range(ia + 1, n):
                c = order_main[ic]
                s = main[c] - main[a]
                t = 0
                pos_a = -1
                pos_c = -1
                pref[0] = 0
                for kk in range(n):
                    p = order_other[kk]
                    if main[p] >= main[a] and main[p] <= main[c]:
                        tid[t] = p
                        tv[t] = other[p]
                        if p == a:
                            pos_a = t
                        elif p == c:
                            pos_c = t
                        pref[t + 1] = pref[t] + (1 if cat[p] == 0 else 0)
                        t += 1
                if t < size_want:
                    continue
                lo_pos = pos_a if pos_a < pos_c else pos_c
                hi_pos = pos_c if pos_a < pos_c else pos_a
                jmax_prev = -1
                j = 0
                for i in range(t):
                    if i > lo_pos:
                        break
                    if j < i:
                        j = i
                    while j + 1 < t and tv[j + 1] - tv[i] <= s:
                        j += 1
                    jj = i + size_want - 1
                    jlo = i
                    if jmax_prev > jlo:
                        jlo = jmax_prev
                    if jlo < hi_pos:
                        jlo = hi_pos
                    if jj >= jlo and jj <= j:
                        zeros = pref[jj + 1] - pref[i]
                        if zeros == 0 or zeros == size_want:
                            members = _grow64(members, m_used, size_want)
                            for q in range(i, jj + 1):
                                members[m_used] = tid[q]
                                m_used += 1
                            if r_used + 2 > offsets.shape[0]:
                                offsets = _grow64(offsets, r_used + 1, 1)
                            r_used += 1
                            offsets[r_used] = m_used
                    jmax_prev = j
    return members[:m_used].copy(), offsets[: r_used + 1].copy()


@njit(cache=True)
def sq_verify(xs, ys, ox, oy, user, cat, m_thresh):
    """Scan all multi-point ranges; count them and report monochromatic stats.

    user: uint8 mask (1 = user point, 0 = hull augmentation, not counted)
    cat:  uint8 final color class in {0, 1}
    Returns (total_multi_ranges, max_mono_user_size, viol_members, viol_offsets).
    """
    n = xs.shape[0]
    viol_m = np.empty(1024, dtype=np.int64)
    viol_o = np.empty(256, dtype=np.int64)
    vm_used = 0
    vr_used = 0
    viol_o[0] = 0
    total = 0
    max_mono = 0
    tid = np.empty(n, dtype=np.int64)
    tv = np.empty(n, dtype=np.int64)
    pref_u = np.empty(n + 1, dtype=np.int64)
    pref_u0 = np.empty(n + 1, dtype=np.int64)
    for axis in range(2):
        if axis == 0:
            main, other, order_main, order_other = xs, ys, ox, oy
        else:
            main, other, order_main, order_other = ys, xs, oy, ox
        for ia in range(n):
            a = order_main[ia]
            for ic in range(ia + 1, n):
                c = order_main[ic]
                s = main[c] - main[a]
                t = 0
                pos_a = -1
                pos_c = -1
                pref_u[0] = 0
                pref_u0[0] = 0
                for kk in range(n):
                    p = order_other[kk]
                    if main[p] >= main[a] and main[p] <= main[c]:
                        tid[t] = p
                        tv[t] = other[p]
                        if p == a:
                            pos_a = t
                        elif p == c:
                            pos_c = t
                        pref_u[t + 1] = pref_u[t] + (1 if user[p] != 0 else 0)
                        pref_u0[t + 1] = pref_u0[t] + (
                            1 if (user[p] != 0 and cat[p] == 0) else 0
                        )
                        t += 1
                lo_pos = pos_a if pos_a < pos_c else pos_c
                hi_pos = pos_c if pos_a < pos_c else pos_a
                jmax_prev = -1
                j = 0
                for i in range(t):
                    if i > lo_pos:
                        break
                    if j < i:
                        j = i
                    while j + 1 < t and tv[j + 1] - tv[i] <= s:
                        j += 1
                    jlo = i
                    if jmax_prev > jlo:
                        jlo = jmax_prev
                    if jlo < hi_pos:
                        jlo = hi_pos
                    for jj in range(jlo, j + 1):
                        total += 1
                        usz = pref_u[jj + 1] - pref_u[i]
                        if usz == 0:
                            continue
                        u0 = pref_u0[jj + 1] - pref_u0[i]
                        if u0 == 0 or u0 == usz:
                            if usz > max_mono:
                                max_mono = usz
                            if usz >= m_thresh:
                                size = jj - i + 1
                                viol_m = _grow64(viol_m, vm_used, size)
                                for q in range(i, jj + 1):
                                    viol_m[vm_used] = tid[q]
                                    vm_used += 1
                                if vr_used + 2 > viol_o.shape[0]:
                                    viol_o = _grow64(viol_o, vr_used + 1, 1)
                                vr_used += 1
                                viol_o[vr_used] = vm_used
                    jmax_prev = j
    return total, max_mono, viol_m[:vm_used].copy(), viol_o[: vr_used + 1].copy()


@njit(cache=True)
def sq_verify_k(xs, ys, ox, oy, user, labels, k, mk_thresh):
    """Polychromatic scan: ranges lacking one of the k labels among user pts.

    Returns (total_multi, max_user_size_missing_some_label, viol_members,
    viol_offsets) where violations are ranges with user size >= mk_thresh
    that miss at least one label.
    """
    n = xs.shape[0]
    viol_m = np.empty(1024, dtype=np.int64)
    viol_o = np.empty(256, dtype=np.int64)
    vm_used = 0
    vr_used = 0
    viol_o[0] = 0
    total = 0
    max_missing = 0
    tid = np.empty(n, dtype=np.int64)
    tv = np.empty(n, dtype=np.int64)
    pref = np.empty((k + 1, n + 1), dtype=np.int64)
    for axis in range(2):
        if axis == 0:
            main, other, order_main, order_other = xs, ys, ox, oy
        else:
            main, other, order_main, order_other = ys, xs, oy, ox
        for ia in range(n):
            a = order_main[ia]
            for ic in range(ia + 1, n):
                c = order_main[ic]
                s = main[c] - main[a]
                t = 0
                pos_a = -1
                pos_c = -1
                for lab in range(k + 1):
                    pref[lab, 0] = 0
                for kk in range(n):
                    p = order_other[kk]
                    if main[p] >= main[a] and main[p] <= main[c]:
                        tid[t] = p
                        tv[t] = other[p]
                        if p == a:
                            pos_a = t
                        elif p == c:
                            pos_c = t
                        for lab in range(k):
                            pref[lab, t + 1] = pref[lab, t] + (
                                1 if (user[p] != 0 and labels[p] == lab) else 0
                            )
                        pref[k, t + 1] = pref[k, t] + (1 if user[p] != 0 else 0)
                        t += 1
                lo_pos = pos_a if pos_a < pos_c else pos_c
                hi_pos = pos_c if pos_a < pos_c else pos_a
                jmax_prev = -1
                j = 0
                for i in range(t):
                    if i > lo_pos:
                        break
                    if j < i:
                        j = i
                    while j + 1 < t and tv[j + 1] - tv[i] <= s:
                        j += 1
                    jlo = i
                    if jmax_prev > jlo:
                        jlo = jmax_prev
                    if jlo < hi_pos:
                        jlo = hi_pos
                    for jj in range(jlo, j + 1):
                        total += 1
                        usz = pref[k, jj + 1] - pref[k, i]
                        if usz == 0:
                            continue
                        all_present = True
                        for lab in range(k):
                            if pref[lab, jj + 1] - pref[lab, i] == 0:
                                all_present = False
                                break
                        if not all_present:
                            if usz > max_missing:
                                max_missing = usz
                            if usz >= mk_thresh:
                                size = jj - i + 1
                                viol_m = _grow64(viol_m, vm_used, size)
                                for q in range(i, jj + 1):
                                    viol_m[vm_used] = tid[q]
                                    vm_used += 1
                                if vr_used + 2 > viol_o.shape[0]:
                                    viol_o = _grow64(viol_o, vr_used + 1, 1)
                                vr_used += 1
                                viol_o[vr_used] = vm_used
                    jmax_prev = j
    return total, max_missing, viol_m[:vm_used].copy(), viol_o[: vr_used + 1].copy()


@njit(cache=True)
def tri_collect(d1, d2, d3):
    """All realized multi-point ranges for the reference triangle.

    d1, d2, d3: per-point side-normal dot products.  A candidate offset
    triple (t1,t2,t3) is canonical iff it equals the componentwise maxima of
    the dots of its own subset; each realized multi-subset has exactly one
    canonical triple.
    """
    n = d1.shape[0]
    members = np.empty(1024, dtype=np.int64)
    offsets = np.empty(1024, dtype=np.int64)
    m_used = 0
    r_used = 0
    offsets[0] = 0
    sub = np.empty(n, dtype=np.int64)
    for i in range(n):
        t1 = d1[i]
        for j in range(n):
            t2 = d2[j]
            if d1[j] > t1:
                continue
            if d2[i] > t2:
                continue
            for kk in range(n):
                t3 = d3[kk]
                if t1 + t2 + t3 <= 0:
                    continue
                if d3[i] > t3 or d3[j] > t3:
                    continue
                if d1[kk] > t1 or d2[kk] > t2:
                    continue
                cnt = 0
                m1 = t1
                m2 = t2
                m3 = t3
                first = True
                for p in range(n):
                    if d1[p] <= t1 and d2[p] <= t2 and d3[p] <= t3:
                        sub[cnt] = p
                        cnt += 1
                        if first:
                            m1 = d1[p]
                            m2 = d2[p]
                            m3 = d3[p]
                            first = False
                        else:
                            if d1[p] > m1:
                                m1 = d1[p]
                            if d2[p] > m2:
                                m2 = d2[p]
                            if d3[p] > m3:
                                m3 = d3[p]
                if cnt < 2:
                    continue
                if m1 != t1 or m2 != t2 or m3 != t3:
                    continue
                members = _grow64(members, m_used, cnt)
                for q in range(cnt):
                    members[m_used] = sub[q]
                    m_used += 1
                offsets = _grow64(offsets, r_used + 1, 1)
                r_used += 1
                offsets[r_used] = m_used
    return members[:m_used].copy(), offsets[: r_used + 1].copy()


@njit(cache=True)
def tri_pairs(d1, d2, d3):
    """Realized two-point ranges for the reference triangle."""
    n = d1.shape[0]
    out = np.empty(2048, dtype=np.int64)
    used = 0
    for a in range(n):
        for b in range(a + 1, n):
            t1 = d1[a] if d1[a] > d1[b] else d1[b]
            t2 = d2[a] if d2[a] > d2[b] else d2[b]
            t3 = d3[a] if d3[a] > d3[b] else d3[b]
            if t1 + t2 + t3 <= 0:
                continue
            ok = True
            for p in range(n):
                if p == a or p == b:
                    continue
                if d1[p] <= t1 and d2[p] <= t2 and d3[p] <= t3:
                    ok = False
                    break
            if ok:
                if used + 2 > out.shape[0]:
                    out = _grow64(out, used, 2)
                out[used] = a
                out[used + 1] = b
                used += 2
    return out[:used].copy().reshape(-1, 2)


@njit(cache=True)
def tri_sized_mono(d1, d2, d3, cat, size_want):
    """Exactly-size_want tri ranges monochromatic in cat; (members, offsets)."""
    n = d1.shape[0]
    members = np.empty(1024, dtype=np.int64)
    offsets = np.empty(256, dtype=np.int64)
    m_used = 0
    r_used = 0
    offsets[0] = 0
    sub = np.empty(n, dtype=np.int64)
    for i in range(n):
        t1 = d1[i]
        for j in range(n):
            t2 = d2[j]
            if d1[j] > t1 or d2[i] > t2:
                continue
            for kk in range(n):
                t3 = d3[kk]
                if t1 + t2 + t3 <= 0:
                    continue
                if d3[i] > t3 or d3[j] > t3 or d1[kk] > t1 or d2[kk] > t2:
                    continue
                cnt = 0
                zeros = 0
                m1 = t1
                m2 = t2
                m3 = t3
                first = True
                for p in range(n):
                    if d1[p] <= t1 and d2[p] <= t2 and d3[p] <= t3:
                        if cnt >= size_want:
                            cnt += 1
                            break
                        sub[cnt] = p
                        cnt += 1
                        if cat[p] == 0:
                            zeros += 1
                        if first:
                            m1 = d1[p]
                            m2 = d2[p]
                            m3 = d3[p]
                            first = False
                        else:
                            if d1[p] > m1:
                                m1 = d1[p]
                            if d2[p] > m2:
                                m2 = d2[p]
                            if d3[p] > m3:
                                m3 = d3[p]
                if cnt != size_want:
                    continue
                if m1 != t1 or m2 != t2 or m3 != t3:
                    continue
                if zeros != 0 and zeros != size_want:
                    continue
                members = _grow64(members, m_used, cnt)
                for q in range(cnt):
                    members[m_used] = sub[q]
                    m_used += 1
                if r_used + 2 > offsets.shape[0]:
                    offsets = _grow64(offsets, r_used + 1, 1)
                r_used += 1
                offsets[r_used] = m_used
    return members[:m_used].copy(), offsets[: r_used + 1].copy()


@njit(cache=True)
def tri_verify(d1, d2, d3, user, cat, m_thresh):
    """Verify scan over all canonical tri ranges; mirrors sq_verify."""
    n = d1.shape[0]
    viol_m = np.empty(1024, dtype=np.int64)
    viol_o = np.empty(256, dtype=np.int64)
    vm_used = 0
    vr_used = 0
    viol_o[0] = 0
    total = 0
    max_mono = 0
    sub = np.empty(n, dtype=np.int64)
    for i in range(n):
        t1 = d1[i]
        for j in range(n):
            t2 = d2[j]
            if d1[j] > t1 or d2[i] > t2:
                continue
            for kk in range(n):
                t3 = d3[kk]
                if t1 + t2 + t3 <= 0:
                    continue
                if d3[i] > t3 or d3[j] > t3 or d1[kk] > t1 or d2[kk] > t2:
                    continue
                cnt = 0
                usz = 0
                u0 = 0
                m1 = t1
                m2 = t2
                m3 = t3
                first = True
                for p in range(n):
                    if d1[p] <= t1 and d2[p] <= t2 and d3[p] <= t3:
                        sub[cnt] = p
                        cnt += 1
                        if user[p] != 0:
                            usz += 1
                            if cat[p] == 0:
                                u0 += 1
                        if first:
                            m1 = d1[p]
                            m2 = d2[p]
                            m3 = d3[p]
                            first = False
                        else:
                            if d1[p] > m1:
                                m1 = d1[p]
                            if d2[p] > m2:
                                m2 = d2[p]
                            if d3[p] > m3:
                                m3 = d3[p]
                if cnt < 2:
                    continue
                if m1 != t1 or m2 != t2 or m3 != t3:
                    continue
                total += 1
                if usz == 0:
                    continue
                if u0 == 0 or u0 == usz:
                    if usz > max_mono:
                        max_mono = usz
                    if usz >= m_thresh:
                        viol_m = _grow64(viol_m, vm_used, cnt)
                        for q in range(cnt):
                            viol_m[vm_used] = sub[q]
                            vm_used += 1
                        if vr_used + 2 > viol_o.shape[0]:
                            viol_o = _grow64(viol_o, vr_used + 1, 1)
                        vr_used += 1
                        viol_o[vr_used] = vm_used
    return total, max_mono, viol_m[:vm_used].copy(), viol_o[: vr_used + 1].copy()


@njit(cache=True)
def range_connectivity(members, offsets, indptr, adj):
    """Check each range induces a connected subgraph; -1 if all pass, else
    the index of the first failing range."""
    n = indptr.shape[0] - 1
    stamp = np.full(n, -1, dtype=np.int64)
    seen = np.full(n, -1, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    nr = offsets.shape[0] - 1
    for r in range(nr):
        lo = offsets[r]
        hi = offsets[r + 1]
        size = hi - lo
        if size <= 1:
            continue
        for q in range(lo, hi):
            stamp[members[q]] = r
        top = 0
        stack[top] = members[lo]
        top += 1
        seen[members[lo]] = r
        cnt = 1
        while top > 0:
            top -= 1
            v = stack[top]
            for e in range(indptr[v], indptr[v + 1]):
                w = adj[e]
                if stamp[w] == r and seen[w] != r:
                    seen[w] = r
                    stack[top] = w
                    top += 1
                    cnt += 1
        if cnt != size:
            return r
    return -1


@njit(cache=True)
def range_edge_count(members, offsets, indptr, adj):
    """Number of induced edges per range (for tree detection)."""
    n = indptr.shape[0] - 1
    stamp = np.full(n, -1, dtype=np.int64)
    nr = offsets.shape[0] - 1
    out = np.zeros(nr, dtype=np.int64)
    for r in range(nr):
        lo = offsets[r]
        hi = offsets[r + 1]
        for q in range(lo, hi):
            stamp[members[q]] = r
        cnt = 0
        for q in range(lo, hi):
            v = members[q]
            for e in range(indptr[v], indptr[v + 1]):
                if stamp[adj[e]] == r:
                    cnt += 1
        out[r] = cnt // 2
    return out
