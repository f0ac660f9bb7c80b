"""Pure-numpy fallback implementations of the enumeration kernels.

Same contracts and emission order as kernels_numba; selected with
POLYCHROME_BACKEND=numpy (or automatically when numba is unavailable).
Outer generator loops stay in Python, inner work is vectorized.
"""

import numpy as np


def _axis_views(axis, xs, ys, ox, oy):
    if axis == 0:
        return xs, ys, ox, oy
    return ys, xs, oy, ox


def _generator_T(main, other, order_other, a, c):
    sel = (main[order_other] >= main[a]) & (main[order_other] <= main[c])
    tids = order_other[sel]
    tvs = other[tids]
    pos_a = int(np.nonzero(tids == a)[0][0])
    pos_c = int(np.nonzero(tids == c)[0][0])
    return tids, tvs, pos_a, pos_c


def _window_intervals(tvs, s, lo_pos, hi_pos):
    """Realized intervals (i, j) with i <= lo_pos and j >= hi_pos, in
    (i asc, j asc) order.  Returns (i_rep, j_flat) int arrays."""
    t = tvs.shape[0]
    jmax = np.searchsorted(tvs, tvs + s, side="right") - 1
    jmax_prev = np.empty(t, dtype=np.int64)
    jmax_prev[0] = -1
    jmax_prev[1:] = jmax[:-1]
    idx = np.arange(t, dtype=np.int64)
    jlo = np.maximum(np.maximum(idx, jmax_prev), hi_pos)
    counts = np.where(idx <= lo_pos, np.maximum(jmax - jlo + 1, 0), 0)
    total = int(counts.sum())
    if total == 0:
        return (np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64))
    i_rep = np.repeat(idx, counts)
    offs = np.cumsum(counts) - counts
    pos = np.arange(total, dtype=np.int64) - np.repeat(offs, counts)
    j_flat = np.repeat(jlo, counts) + pos
    return i_rep, j_flat


def sq_collect(xs, ys, ox, oy):
    members = []
    offsets = [0]
    used = 0
    n = xs.shape[0]
    for axis in range(2):
        main, other, order_main, order_other = _axis_views(axis, xs, ys, ox, oy)
        for ia in range(n):
            a = order_main[ia]
            for ic in range(ia + 1, n):
                c = order_main[ic]
                s = main[c] - main[a]
                tids, tvs, pos_a, pos_c = _generator_T(main, other, order_other, a, c)
                lo_pos, hi_pos = min(pos_a, pos_c), max(pos_a, pos_c)
                i_rep, j_flat = _window_intervals(tvs, s, lo_pos, hi_pos)
                for i, j in zip(i_rep, j_flat):
                    members.append(tids[i : j + 1])
                    used += int(j - i + 1)
                    offsets.append(used)
    flat = np.concatenate(members) if members else np.empty(0, dtype=np.int64)
    return flat.astype(np.int64), np.asarray(offsets, dtype=np.int64)


def sq_pairs(xs, ys, ox, oy):
    out = []
    n = xs.shape[0]
    for axis in range(2):
        main, other, order_main, order_other = _axis_views(axis, xs, ys, ox, oy)
        for ia in range(n):
            a = order_main[ia]
            for ic in range(ia + 1, n):
                c = order_main[ic]
                s = main[c] - main[a]
                if abs(int(other[c]) - int(other[a])) > s:
                    continue
                tids, tvs, pos_a, pos_c = _generator_T(main, other, order_other, a, c)
                i, j = min(pos_a, pos_c), max(pos_a, pos_c)
                if j != i + 1:
                    continue
                if 0 < i and j < len(tids) - 1 and tvs[j + 1] - tvs[i - 1] <= s:
                    continue
                out.append((a, c))
    return np.asarray(out, dtype=np.int64).reshape(-1, 2)


def sq_sized_mono(xs, ys, ox, oy, cat, size_want):
    members = []
    offsets = [0]
    used = 0
    n = xs.shape[0]
    cat = np.asarray(cat)
    for axis in range(2):
        main, other, order_main, order_other = _axis_views(axis, xs, ys, ox, oy)
        for ia in range(n):
            a = order_main[ia]
            for ic in range(ia + 1, n):
                c = order_main[ic]
                s = main[c] - main[a]
                tids, tvs, pos_a, pos_c = _generator_T(main, other, order_other, a, c)
                if len(tids) < size_want:
                    continue
                lo_pos, hi_pos = min(pos_a, pos_c), max(pos_a, pos_c)
                i_rep, j_flat = _window_intervals(tvs, s, lo_pos, hi_pos)
                if i_rep.size == 0:
                    continue
                sized = (j_flat - i_rep + 1) == size_want
                if not sized.any():
                    continue
                pref = np.concatenate(([0], np.cumsum(cat[tids] == 0)))
                for i, j in zip(i_rep[sized], j_flat[sized]):
                    zeros = int(pref[j + 1] - pref[i])
                    if zeros == 0 or zeros == size_want:
                        members.append(tids[i : j + 1])
                        used += size_want
                        offsets.append(used)
    flat = np.concatenate(members) if members else np.empty(0, dtype=np.int64)
    return flat.astype(np.int64), np.asarray(offsets, dtype=np.int64)


def sq_verify(xs, ys, ox, oy, user, cat, m_thresh):
    n = xs.shape[0]
    user = np.asarray(user)
    cat = np.asarray(cat)
    total = 0
    max_mono = 0
    viol_members = []
    viol_offsets = [0]
    vused = 0
    for axis in range(2):
        main, other, order_main, order_other = _axis_views(axis, xs, ys, ox, oy)
        for ia in range(n):
            a = order_main[ia]
            for ic in range(ia + 1, n):
                c = order_main[ic]
                s = main[c] - main[a]
                tids, tvs, pos_a, pos_c = _generator_T(main, other, order_other, a, c)
                lo_pos, hi_pos = min(pos_a, pos_c), max(pos_a, pos_c)
                i_rep, j_flat = _window_intervals(tvs, s, lo_pos, hi_pos)
                if i_rep.size == 0:
                    continue
                total += int(i_rep.size)
                u = user[tids] != 0
                pref_u = np.concatenate(([0], np.cumsum(u)))
                pref_u0 = np.concatenate(([0], np.cumsum(u & (cat[tids] == 0))))
                usz = pref_u[j_flat + 1] - pref_u[i_rep]
                u0 = pref_u0[j_flat + 1] - pref_u0[i_rep]
                mono = (usz > 0) & ((u0 == 0) | (u0 == usz))
                if mono.any():
                    mm = int(usz[mono].max())
                    if mm > max_mono:
                        max_mono = mm
                    viol = mono & (usz >= m_thresh)
                    for i, j in zip(i_rep[viol], j_flat[viol]):
                        viol_members.append(tids[i : j + 1])
                        vused += int(j - i + 1)
                        viol_offsets.append(vused)
    flat = np.concatenate(viol_members) if viol_members else np.empty(0, dtype=np.int64)
    return total, max_mono, flat.astype(np.int64), np.asarray(viol_offsets, dtype=np.int64)


def sq_verify_k(xs, ys, ox, oy, user, labels, k, mk_thresh):
    n = xs.shape[0]
    user = np.asarray(user)
    labels = np.asarray(labels)
    total = 0
    max_missing = 0
    viol_members = []
    viol_offsets = [0]
    vused = 0
    for axis in range(2):
        main, other, order_main, order_other = _axis_views(axis, xs, ys, ox, oy)
        for ia in range(n):
            a = order_main[ia]
            for ic in range(ia + 1, n):
                c = order_main[ic]
                s = main[c] - main[a]
                tids, tvs, pos_a, pos_c = _generator_T(main, other, order_other, a, c)
                lo_pos, hi_pos = min(pos_a, pos_c), max(pos_a, pos_c)
                i_rep, j_flat = _window_intervals(tvs, s, lo_pos, hi_pos)
                if i_rep.size == 0:
                    continue
                total += int(i_rep.size)
                u = user[tids] != 0
                pref_u = np.concatenate(([0], np.cumsum(u)))
                usz = pref_u[j_flat + 1] - pref_u[i_rep]
                all_present = np.ones(i_rep.size, dtype=bool)
                for lab in range(k):
                    pref = np.concatenate(([0], np.cumsum(u & (labels[tids] == lab))))
                    all_present &= (pref[j_flat + 1] - pref[i_rep]) > 0
                missing = (usz > 0) & ~all_present
                if missing.any():
                    mm = int(usz[missing].max())
                    if mm > max_missing:
                        max_missing = mm
                    viol = missing & (usz >= mk_thresh)
                    for i, j in zip(i_rep[viol], j_flat[viol]):
                        viol_members.append(tids[i : j + 1])
                        vused += int(j - i + 1)
                        viol_offsets.append(vused)
    flat = np.concatenate(viol_members) if viol_members else np.empty(0, dtype=np.int64)
    return total, max_missing, flat.astype(np.int64), np.asarray(viol_offsets, dtype=np.int64)


def _tri_candidates(d1, d2, d3):
    """Yield (t1, t2, t3, contained_mask, cnt) for canonical candidates in
    the numba iteration order (i, j, k ascending)."""
    n = d1.shape[0]
    neg = np.iinfo(np.int64).min
    for i in range(n):
        t1 = d1[i]
        base1 = d1 <= t1
        for j in range(n):
            t2 = d2[j]
            if d1[j] > t1 or d2[i] > t2:
                continue
            base = base1 & (d2 <= t2)
            t3s = d3.copy()
            # candidate k rows: contained = base & (d3 <= t3)
            ok_alpha = (t1 + t2 + t3s) > 0
            ok_gen = (d3[i] <= t3s) & (d3[j] <= t3s) & (d1 <= t1) & (d2 <= t2)
            rows = np.nonzero(ok_alpha & ok_gen)[0]
            if rows.size == 0:
                continue
            contained = base[None, :] & (d3[None, :] <= t3s[rows][:, None])
            cnt = contained.sum(axis=1)
            m1 = np.where(contained, d1[None, :], neg).max(axis=1)
            m2 = np.where(contained, d2[None, :], neg).max(axis=1)
            m3 = np.where(contained, d3[None, :], neg).max(axis=1)
            keep = (cnt >= 2) & (m1 == t1) & (m2 == t2) & (m3 == t3s[rows])
            for r in np.nonzero(keep)[0]:
                yield t1, t2, int(t3s[rows][r]), contained[r], int(cnt[r])


def tri_collect(d1, d2, d3):
    members = []
    offsets = [0]
    used = 0
    for _t1, _t2, _t3, mask, cnt in _tri_candidates(d1, d2, d3):
        members.append(np.nonzero(mask)[0].astype(np.int64))
        used += cnt
        offsets.append(used)
    flat = np.concatenate(members) if members else np.empty(0, dtype=np.int64)
    return flat.astype(np.int64), np.asarray(offsets, dtype=np.int64)


def tri_pairs(d1, d2, d3):
    n = d1.shape[0]
    out = []
    for a in range(n):
        for b in range(a + 1, n):
            t1 = max(d1[a], d1[b])
            t2 = max(d2[a], d2[b])
            t3 = max(d3[a], d3[b])
            if t1 + t2 + t3 <= 0:
                continue
            inside = (d1 <= t1) & (d2 <= t2) & (d3 <= t3)
            if int(inside.sum()) == 2:
                out.append((a, b))
    return np.asarray(out, dtype=np.int64).reshape(-1, 2)


def tri_sized_mono(d1, d2, d3, cat, size_want):
    cat = np.asarray(cat)
    members = []
    offsets = [0]
    used = 0
    for _t1, _t2, _t3, mask, cnt in _tri_candidates(d1, d2, d3):
        if cnt != size_want:
            continue
        zeros = int((mask & (cat == 0)).sum())
        if zeros == 0 or zeros == size_want:
            members.append(np.nonzero(mask)[0].astype(np.int64))
            used += cnt
            offsets.append(used)
    flat = np.concatenate(members) if members else np.empty(0, dtype=np.int64)
    return flat.astype(np.int64), np.asarray(offsets, dtype=np.int64)


def tri_verify(d1, d2, d3, user, cat, m_thresh):
    user = np.asarray(user) != 0
    cat = np.asarray(cat)
    total = 0
    max_mono = 0
    viol_members = []
    viol_offsets = [0]
    vused = 0
    for _t1, _t2, _t3, mask, cnt in _tri_candidates(d1, d2, d3):
        total += 1
        usz = int((mask & user).sum())
        if usz == 0:
            continue
        u0 = int((mask & user & (cat == 0)).sum())
        if u0 == 0 or u0 == usz:
            if usz > max_mono:
                max_mono = usz
            if usz >= m_thresh:
                viol_members.append(np.nonzero(mask)[0].astype(np.int64))
                vused += cnt
                viol_offsets.append(vused)
    flat = np.concatenate(viol_members) if viol_members else np.empty(0, dtype=np.int64)
    return total, max_mono, flat.astype(np.int64), np.asarray(viol_offsets, dtype=np.int64)


def range_connectivity(members, offsets, indptr, adj):
    n = indptr.shape[0] - 1
    adj_list = [adj[indptr[v] : indptr[v + 1]] for v in range(n)]
    nr = offsets.shape[0] - 1
    for r in range(nr):
        mem = members[offsets[r] : offsets[r + 1]]
        size = mem.shape[0]
        if size <= 1:
            continue
        inside = set(int(v) for v in mem)
        seen = {int(mem[0])}
        stack = [int(mem[0])]
        while stack:
            v = stack.pop()
            for w in adj_list[v]:
                w = int(w)
                if w in inside and w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != size:
            return r
    return -1


def range_edge_count(members, offsets, indptr, adj):
    n = indptr.shape[0] - 1
    adj_list = [set(int(w) for w in adj[indptr[v] : indptr[v + 1]]) for v in range(n)]
    nr = offsets.shape[0] - 1
    out = np.zeros(nr, dtype=np.int64)
    for r in range(nr):
        mem = [int(v) for v in members[offsets[r] : offsets[r + 1]]]
        inside = set(mem)
        cnt = 0
        for v in mem:
            cnt += len(adj_list[v] & inside)
        out[r] = cnt // 2
    return out
