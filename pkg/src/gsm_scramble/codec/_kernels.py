"""GSM 06.10 full-rate arithmetic kernels.

Everything here works on int64 scalars and arrays but reproduces the 16-bit
word / 32-bit longword saturating fixed point of the standard bit for bit.
The functions are compiled with numba when it is importable and run as plain
Python otherwise (same results, roughly 100x slower).

Parameter vector layout for one frame (76 entries)::

    [0:8]                 LARc[1..8]
    [8 + 17*k + 0]        Nc   (LTP lag), sub-frame k
    [8 + 17*k + 1]        bc   (LTP gain code)
    [8 + 17*k + 2]        Mc   (RPE grid position)
    [8 + 17*k + 3]        xmaxc (block maximum code)
    [8 + 17*k + 4 : +17]  xMc[0..12] (RPE pulse codes)
"""

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

MIN_WORD = -32768
MAX_WORD = 32767
MIN_LONGWORD = -2147483648
MAX_LONGWORD = 2147483647

N_PARAMS = 76

# fmt: off
LAR_A = np.array([20480, 20480, 20480, 20480, 13964, 15360, 8534, 9036], dtype=np.int64)
LAR_B = np.array([0, 0, 2048, -2560, 94, -1792, -341, -1144], dtype=np.int64)
LAR_MIC = np.array([-32, -32, -16, -16, -8, -8, -4, -4], dtype=np.int64)
LAR_MAC = np.array([31, 31, 15, 15, 7, 7, 3, 3], dtype=np.int64)
LAR_INVA = np.array([13107, 13107, 13107, 13107, 19223, 17476, 31454, 29708], dtype=np.int64)
DLB = np.array([6554, 16384, 26214, 32767], dtype=np.int64)
QLB = np.array([3277, 11469, 21299, 32767], dtype=np.int64)
NRFAC = np.array([29128, 26215, 23832, 21846, 20165, 18725, 17476, 16384], dtype=np.int64)
FAC = np.array([18431, 20479, 22527, 24575, 26623, 28671, 30719, 32767], dtype=np.int64)
H_WEIGHT = np.array([-134, -374, 0, 2054, 5741, 8192, 5741, 2054, 0, -374, -134], dtype=np.int64)
# fmt: on


# -- basic operators ---------------------------------------------------------

@njit(cache=True)
def sat16(x):
    if x > MAX_WORD:
        return MAX_WORD
    if x < MIN_WORD:
        return MIN_WORD
    return x


@njit(cache=True)
def sat32(x):
    if x > MAX_LONGWORD:
        return MAX_LONGWORD
    if x < MIN_LONGWORD:
        return MIN_LONGWORD
    return x


@njit(cache=True)
def add(a, b):
    return sat16(a + b)


@njit(cache=True)
def sub(a, b):
    return sat16(a - b)


@njit(cache=True)
def l_add(a, b):
    return sat32(a + b)


@njit(cache=True)
def mult(a, b):
    if a == MIN_WORD and b == MIN_WORD:
        return MAX_WORD
    return (a * b) >> 15


@njit(cache=True)
def mult_r(a, b):
    if a == MIN_WORD and b == MIN_WORD:
        return MAX_WORD
    return (a * b + 16384) >> 15


@njit(cache=True)
def gabs(a):
    if a < 0:
        if a == MIN_WORD:
            return MAX_WORD
        return -a
    return a


@njit(cache=True)
def norm(a):
    # Left shifts needed to bring a 32-bit value into [2^30, 2^31).
    if a < 0:
        if a <= -1073741824:
            return 0
        a = ~a
    n = 31
    while a:
        a >>= 1
        n -= 1
    return n


@njit(cache=True)
def div(num, denum):
    # 0 <= num <= denum; 15-bit fractional quotient.
    if num == 0:
        return 0
    l_num = num
    q = 0
    for _ in range(15):
        q <<= 1
        l_num <<= 1
        if l_num >= denum:
            l_num -= denum
            q += 1
    return q


@njit(cache=True)
def asr(a, n):
    if n >= 16:
        return -1 if a < 0 else 0
    if n <= -16:
        return 0
    if n < 0:
        return a << -n
    return a >> n


@njit(cache=True)
def asl(a, n):
    if n >= 16:
        return 0
    if n <= -16:
        return -1 if a < 0 else 0
    if n < 0:
        return asr(a, -n)
    return a << n


# -- preprocessing -----------------------------------------------------------

@njit(cache=True)
def preprocess(s, so, pre):
    """Downscale, offset compensation and pre-emphasis of 160 samples.

    ``pre`` holds the filter memories ``[z1, L_z2, mp]`` and is updated.
    """
    z1 = pre[0]
    l_z2 = pre[1]
    mp = pre[2]
    for k in range(160):
        so_k = (s[k] >> 3) << 2
        s1 = so_k - z1
        z1 = so_k
        l_s2 = s1 << 15
        msp = l_z2 >> 15
        lsp = l_z2 - (msp << 15)
        l_s2 += mult_r(lsp, 32735)
        l_z2 = l_add(msp * 32735, l_s2)
        l_temp = l_add(l_z2, 16384)
        msp = mult_r(mp, -28180)
        mp = l_temp >> 15
        so[k] = add(mp, msp)
    pre[0] = z1
    pre[1] = l_z2
    pre[2] = mp


# -- LPC analysis ------------------------------------------------------------

@njit(cache=True)
def autocorrelation(s, l_acf):
    """Nine-lag autocorrelation; rescales ``s`` in place as the standard does."""
    smax = 0
    for k in range(160):
        t = gabs(s[k])
        if t > smax:
            smax = t
    if smax == 0:
        scalauto = 0
    else:
        scalauto = 4 - norm(smax << 16)
    if scalauto > 0:
        factor = 16384 >> (scalauto - 1)
        for k in range(160):
            s[k] = mult_r(s[k], factor)
    for k in range(9):
        acc = 0
        for i in range(k, 160):
            acc += s[i] * s[i - k]
        l_acf[k] = acc << 1
    if scalauto > 0:
        for k in range(160):
            s[k] = s[k] << scalauto


@njit(cache=True)
def reflection_coefficients(l_acf, r):
    """Schur recursion from the autocorrelation to 8 reflection coefficients."""
    if l_acf[0] == 0:
        for i in range(8):
            r[i] = 0
        return
    acf = np.zeros(9, dtype=np.int64)
    p = np.zeros(9, dtype=np.int64)
    kk = np.zeros(9, dtype=np.int64)
    temp = norm(l_acf[0])
    for i in range(9):
        acf[i] = (l_acf[i] << temp) >> 16
    for i in range(1, 8):
        kk[i] = acf[i]
    for i in range(9):
        p[i] = acf[i]
    for n in range(1, 9):
        temp = gabs(p[1])
        if p[0] < temp:
            for i in range(n - 1, 8):
                r[i] = 0
            return
        rn = div(temp, p[0])
        if p[1] > 0:
            rn = -rn
        r[n - 1] = rn
        if n == 8:
            return
        p[0] = add(p[0], mult_r(p[1], rn))
        for m in range(1, 9 - n):
            p[m] = add(p[m + 1], mult_r(kk[m], rn))
            kk[m] = add(kk[m], mult_r(p[m + 1], rn))


@njit(cache=True)
def reflection_to_lar(r, lar):
    for i in range(8):
        temp = gabs(r[i])
        if temp < 22118:
            temp >>= 1
        elif temp < 31130:
            temp -= 11059
        else:
            temp = (temp - 26112) << 2
        lar[i] = -temp if r[i] < 0 else temp


@njit(cache=True)
def quantize_lar(lar, larc):
    for i in range(8):
        temp = mult(LAR_A[i], lar[i])
        temp = add(temp, LAR_B[i])
        temp = add(temp, 256)
        temp >>= 9
        if temp > LAR_MAC[i]:
            larc[i] = LAR_MAC[i] - LAR_MIC[i]
        elif temp < LAR_MIC[i]:
            larc[i] = 0
        else:
            larc[i] = temp - LAR_MIC[i]


@njit(cache=True)
def lpc_analysis(s, larc):
    l_acf = np.zeros(9, dtype=np.int64)
    r = np.zeros(8, dtype=np.int64)
    autocorrelation(s, l_acf)
    reflection_coefficients(l_acf, r)
    reflection_to_lar(r, r)
    quantize_lar(r, larc)


@njit(cache=True)
def decode_lar(larc, larpp):
    for i in range(8):
        temp1 = add(larc[i], LAR_MIC[i]) << 10
        temp1 = sub(temp1, LAR_B[i] << 1)
        temp1 = mult_r(LAR_INVA[i], temp1)
        larpp[i] = add(temp1, temp1)


# -- short-term filtering ----------------------------------------------------

@njit(cache=True)
def _lar_to_rp(larp, rp):
    for i in range(8):
        v = larp[i]
        if v < 0:
            temp = MAX_WORD if v == MIN_WORD else -v
            if temp < 11059:
                temp = temp << 1
            elif temp < 20070:
                temp = temp + 11059
            else:
                temp = add(temp >> 2, 26112)
            rp[i] = -temp
        else:
            temp = v
            if temp < 11059:
                temp = temp << 1
            elif temp < 20070:
                temp = temp + 11059
            else:
                temp = add(temp >> 2, 26112)
            rp[i] = temp


@njit(cache=True)
def interpolated_rp(larpp_prev, larpp_cur, segment, rp):
    """Reflection coefficients for one of the 4 interpolation segments."""
    larp = np.zeros(8, dtype=np.int64)
    for i in range(8):
        a = larpp_prev[i]
        b = larpp_cur[i]
        if segment == 0:
            larp[i] = add(add(a >> 2, b >> 2), a >> 1)
        elif segment == 1:
            larp[i] = add(a >> 1, b >> 1)
        elif segment == 2:
            larp[i] = add(add(a >> 2, b >> 2), b >> 1)
        else:
            larp[i] = b
    _lar_to_rp(larp, rp)


SEGMENT_START = (0, 13, 27, 40)
SEGMENT_END = (13, 27, 40, 160)


@njit(cache=True)
def short_term_analysis(larc, larpp_prev, u, s):
    """Lattice analysis filter over 160 samples of ``s`` (in place)."""
    larpp = np.zeros(8, dtype=np.int64)
    rp = np.zeros(8, dtype=np.int64)
    decode_lar(larc, larpp)
    for seg in range(4):
        interpolated_rp(larpp_prev, larpp, seg, rp)
        for k in range(SEGMENT_START[seg], SEGMENT_END[seg]):
            di = s[k]
            sav = di
            for i in range(8):
                ui = u[i]
                rpi = rp[i]
                u[i] = sav
                sav = add(ui, mult_r(rpi, di))
                di = add(di, mult_r(rpi, ui))
            s[k] = di
    for i in range(8):
        larpp_prev[i] = larpp[i]


@njit(cache=True)
def short_term_synthesis(larc, larpp_prev, v, wt, sr):
    larpp = np.zeros(8, dtype=np.int64)
    rrp = np.zeros(8, dtype=np.int64)
    decode_lar(larc, larpp)
    for seg in range(4):
        interpolated_rp(larpp_prev, larpp, seg, rrp)
        for k in range(SEGMENT_START[seg], SEGMENT_END[seg]):
            sri = wt[k]
            for i in range(7, -1, -1):
                sri = sub(sri, mult_r(rrp[i], v[i]))
                v[i + 1] = add(v[i], mult_r(rrp[i], sri))
            v[0] = sri
            sr[k] = sri
    for i in range(8):
        larpp_prev[i] = larpp[i]


# -- long-term prediction ----------------------------------------------------

@njit(cache=True)
def ltp_parameters(d, d_off, dp, dp_off):
    """Lag and gain code for ``d[d_off:d_off+40]`` against history ending at ``dp[dp_off]``."""
    dmax = 0
    for k in range(40):
        t = gabs(d[d_off + k])
        if t > dmax:
            dmax = t
    temp = 0
    if dmax != 0:
        temp = norm(dmax << 16)
    scal = 0 if temp > 6 else 6 - temp

    wt = np.zeros(40, dtype=np.int64)
    for k in range(40):
        wt[k] = d[d_off + k] >> scal

    l_max = 0
    nc = 40
    for lam in range(40, 121):
        acc = 0
        base = dp_off - lam
        for k in range(40):
            acc += wt[k] * dp[base + k]
        if acc > l_max:
            nc = lam
            l_max = acc

    l_max <<= 1
    l_max >>= 6 - scal

    l_power = 0
    for k in range(40):
        t = dp[dp_off + k - nc] >> 3
        l_power += t * t
    l_power <<= 1

    if l_max <= 0:
        return nc, 0
    if l_max >= l_power:
        return nc, 3
    temp = norm(l_power)
    r = (l_max << temp) >> 16
    s = (l_power << temp) >> 16
    bc = 0
    while bc <= 2:
        if r <= mult(s, DLB[bc]):
            break
        bc += 1
    return nc, bc


# -- RPE encoding ------------------------------------------------------------

@njit(cache=True)
def weighting_filter(e, x):
    """``e`` has 50 entries: 5 zeros, the 40-sample residual, 5 zeros."""
    for k in range(40):
        acc = 4096
        for i in range(11):
            acc += e[k + i] * H_WEIGHT[i]
        acc >>= 13
        if acc < MIN_WORD:
            acc = MIN_WORD
        elif acc > MAX_WORD:
            acc = MAX_WORD
        x[k] = acc


@njit(cache=True)
def grid_selection(x, xm):
    em = -1
    mc = 0
    for m in range(4):
        acc = 0
        for i in range(13):
            t = x[m + 3 * i] >> 2
            acc += t * t
        acc <<= 1
        if acc > em:
            mc = m
            em = acc
    for i in range(13):
        xm[i] = x[mc + 3 * i]
    return mc


@njit(cache=True)
def xmaxc_to_exp_mant(xmaxc):
    exp = 0
    if xmaxc > 15:
        exp = (xmaxc >> 3) - 1
    mant = xmaxc - (exp << 3)
    if mant == 0:
        exp = -4
        mant = 7
    else:
        while mant <= 7:
            mant = (mant << 1) | 1
            exp -= 1
        mant -= 8
    return exp, mant


@njit(cache=True)
def apcm_quantize(xm, xmc):
    xmax = 0
    for i in range(13):
        t = gabs(xm[i])
        if t > xmax:
            xmax = t
    exp = 0
    temp = xmax >> 9
    itest = 0
    for i in range(6):
        if temp <= 0:
            itest = 1
        temp >>= 1
        if itest == 0:
            exp += 1
    xmaxc = add(xmax >> (exp + 5), exp << 3)
    exp, mant = xmaxc_to_exp_mant(xmaxc)
    temp1 = 6 - exp
    temp2 = NRFAC[mant]
    for i in range(13):
        t = xm[i] << temp1
        t = mult(t, temp2)
        xmc[i] = (t >> 12) + 4
    return xmaxc, exp, mant


@njit(cache=True)
def apcm_dequantize(xmc, exp, mant, xmp):
    temp1 = FAC[mant]
    temp2 = sub(6, exp)
    temp3 = asl(1, sub(temp2, 1))
    for i in range(13):
        t = ((xmc[i] << 1) - 7) << 12
        t = mult_r(temp1, t)
        t = add(t, temp3)
        xmp[i] = asr(t, temp2)


@njit(cache=True)
def grid_position(mc, xmp, ep, ep_off):
    for k in range(40):
        ep[ep_off + k] = 0
    for i in range(13):
        ep[ep_off + mc + 3 * i] = xmp[i]


# -- frame coder / decoder ---------------------------------------------------

@njit(cache=True)
def encode_frame(s, params, pre, u, larpp_prev, dp0):
    """Encode 160 samples into ``params``; all state arrays are advanced."""
    so = np.zeros(160, dtype=np.int64)
    preprocess(s, so, pre)
    larc = np.zeros(8, dtype=np.int64)
    lpc_analysis(so, larc)
    short_term_analysis(larc, larpp_prev, u, so)
    for i in range(8):
        params[i] = larc[i]

    e = np.zeros(50, dtype=np.int64)
    x = np.zeros(40, dtype=np.int64)
    xm = np.zeros(13, dtype=np.int64)
    xmc = np.zeros(13, dtype=np.int64)
    xmp = np.zeros(13, dtype=np.int64)
    dpp = np.zeros(40, dtype=np.int64)
    for k in range(4):
        dp_off = 120 + 40 * k
        nc, bc = ltp_parameters(so, 40 * k, dp0, dp_off)
        bp = QLB[bc]
        for i in range(40):
            dpp[i] = mult_r(bp, dp0[dp_off + i - nc])
            e[5 + i] = sub(so[40 * k + i], dpp[i])
        weighting_filter(e, x)
        mc = grid_selection(x, xm)
        xmaxc, exp, mant = apcm_quantize(xm, xmc)
        apcm_dequantize(xmc, exp, mant, xmp)
        grid_position(mc, xmp, e, 5)
        for i in range(40):
            dp0[dp_off + i] = add(e[5 + i], dpp[i])
        base = 8 + 17 * k
        params[base] = nc
        params[base + 1] = bc
        params[base + 2] = mc
        params[base + 3] = xmaxc
        for i in range(13):
            params[base + 4 + i] = xmc[i]
    for i in range(120):
        dp0[i] = dp0[i + 160]


@njit(cache=True)
def decode_frame(params, out, dp0, nrp, v, larpp_prev, msr):
    """Decode one parameter vector to 160 samples; state arrays are advanced.

    ``dp0`` is the 160-entry residual history, ``nrp`` and ``msr`` are
    one-element arrays holding the last valid lag and de-emphasis memory.
    """
    wt = np.zeros(160, dtype=np.int64)
    xmc = np.zeros(13, dtype=np.int64)
    xmp = np.zeros(13, dtype=np.int64)
    erp = np.zeros(40, dtype=np.int64)
    for j in range(4):
        base = 8 + 17 * j
        ncr = params[base]
        bcr = params[base + 1]
        mcr = params[base + 2]
        xmaxcr = params[base + 3]
        for i in range(13):
            xmc[i] = params[base + 4 + i]
        exp, mant = xmaxc_to_exp_mant(xmaxcr)
        apcm_dequantize(xmc, exp, mant, xmp)
        grid_position(mcr, xmp, erp, 0)

        nr = nrp[0] if (ncr < 40 or ncr > 120) else ncr
        nrp[0] = nr
        brp = QLB[bcr]
        for k in range(40):
            drpp = mult_r(brp, dp0[120 + k - nr])
            dp0[120 + k] = add(erp[k], drpp)
        for k in range(40):
            wt[40 * j + k] = dp0[120 + k]
        for k in range(120):
            dp0[k] = dp0[k + 40]

    larc = np.zeros(8, dtype=np.int64)
    for i in range(8):
        larc[i] = params[i]
    sr = np.zeros(160, dtype=np.int64)
    short_term_synthesis(larc, larpp_prev, v, wt, sr)

    m = msr[0]
    for k in range(160):
        m = add(sr[k], mult_r(m, 28180))
        out[k] = add(m, m) & -8
    msr[0] = m


@njit(cache=True)
def encode_frames(samples, params, pre, u, larpp_prev, dp0):
    n = samples.shape[0] // 160
    for f in range(n):
        encode_frame(samples[160 * f : 160 * f + 160], params[f], pre, u, larpp_prev, dp0)


@njit(cache=True)
def decode_frames(params, out, dp0, nrp, v, larpp_prev, msr):
    for f in range(params.shape[0]):
        decode_frame(params[f], out[160 * f : 160 * f + 160], dp0, nrp, v, larpp_prev, msr)
