"""Smoke test for the qcap extension module.

Build and install first, e.g.

    pip install maturin
    maturin develop -m crates/python/Cargo.toml --release
"""

import math

import qcap


def close(a, b, tol=1e-6):
    assert abs(a - b) < tol, (a, b)


def main():
    ad = qcap.Channel.amplitude_damping(0.5)
    assert (ad.d_in, ad.d_out) == (2, 2)
    assert len(ad.kraus()) == 2

    r = qcap.beta(ad)
    close(r.value_log, math.log2(1 + math.sqrt(0.5)))
    assert r.status == "optimal"

    ident = qcap.Channel.identity(2)
    close(qcap.success_prob(ident, 2, "ns").value_linear, 1.0)
    close(qcap.zero_error_m0(ident, "nsppt").value_linear, 2.0)
    close(qcap.one_shot_capacity(ident, 0.0, "ns").value_log, 2.0)

    cq = qcap.Channel.cq_two_state(1.0)
    p = qcap.success_prob(cq, 2, "nsppt")
    close(p.value_linear, 0.5)
    close(qcap.success_prob_dual(cq, 2, "nsppt").value_linear, 0.5)
    assert "F" in p.witness()

    bsc = [[0.9, 0.1], [0.1, 0.9]]
    lp = qcap.ppv_lp(bsc, 0.05)
    sdp = qcap.one_shot_capacity(qcap.Channel.classical(bsc), 0.05, "ns")
    close(lp.value_log, sdp.value_log)
    assert qcap.brute_force_classical_success(bsc, 2) <= qcap.success_prob(qcap.Channel.classical(bsc), 2).value_linear + 1e-7

    t = qcap.Channel.parse("ad:0.3 x ad:0.3")
    assert t.d_in == 4
    close(qcap.beta(t).value_log, 2 * math.log2(1 + math.sqrt(0.7)), 1e-5)

    close(qcap.ea_mutual_info(ident, [[0.5, 0], [0, 0.5]]), 2.0, 1e-10)
    close(qcap.ad_holevo_lower(0.0), 1.0, 1e-9)

    try:
        qcap.one_shot_capacity(ad, 1.5)
    except ValueError:
        pass
    else:
        raise AssertionError("eps out of range accepted")

    for cid, passed, line in qcap.selftest(["1", "7"]):
        assert passed, line
    print("smoke test passed")


if __name__ == "__main__":
    main()
