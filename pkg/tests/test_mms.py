import numpy as np
import pytest

from ncweno.mms import Dual, make_mms, wave
from ncweno.systems.baer_nunziato import BaerNunziato
from ncweno.systems.euler import Euler
from ncweno.systems.layered import DebrisFlow, TwoLayerShallowWater

SYSTEMS = [Euler(1), BaerNunziato(1, 1.4, 0.0, 1.4, 0.0),
           TwoLayerShallowWater(1, 9.8, 0.8), DebrisFlow(1, 9.8, 0.5)]


def test_dual_arithmetic_chain_rule():
    x = np.array([0.3])
    a = wave(1.0, 0.5, 1.0, 0.7, x, 0.2)
    b = wave(2.0, 0.3, 2.0, -0.4, x, 0.2)
    c = (a * b + a / b - 2.0 * b) ** 2
    h = 1e-6

    def val(xx, tt):
        aa = wave(1.0, 0.5, 1.0, 0.7, xx, tt)
        bb = wave(2.0, 0.3, 2.0, -0.4, xx, tt)
        return ((aa * bb + aa / bb - 2.0 * bb) ** 2).val
    assert c.dx[0] == pytest.approx((val(x + h, 0.2) - val(x - h, 0.2))[0] / (2 * h),
                                    rel=1e-7)
    assert c.dt[0] == pytest.approx((val(x, 0.2 + h) - val(x, 0.2 - h))[0] / (2 * h),
                                    rel=1e-7)
    with pytest.raises(ValueError):
        Dual(1.0) ** 0.5


@pytest.mark.parametrize("sys", SYSTEMS, ids=lambda s: s.name)
def test_exact_fields_admissible_and_periodic(sys):
    mms = make_mms(sys)
    x = np.linspace(0.0, 1.0, 65)
    for t in (0.0, 0.13, 0.5):
        u = mms.exact(x, t)
        assert sys.admissible_mask(u).all()
        assert np.allclose(mms.exact(x + 1.0, t), u, rtol=1e-12)


@pytest.mark.parametrize("sys", SYSTEMS, ids=lambda s: s.name)
def test_forcing_matches_residual_of_exact_field(sys):
    # the forcing must equal dU/dt + A(U) dU/dx of the chosen field; check
    # against centered differences of the field itself
    mms = make_mms(sys)
    x = np.linspace(0.0, 1.0, 33)
    t = 0.27
    h = 1e-6
    dudt = (mms.exact(x, t + h) - mms.exact(x, t - h)) / (2 * h)
    dudx = (mms.exact(x + h, t) - mms.exact(x - h, t)) / (2 * h)
    u = mms.exact(x, t)
    a = sys.quasilinear_matrix(u, 0)
    resid = dudt + np.einsum("nij,jn->in", a, dudx)
    f = mms.forcing(x, t)
    assert np.abs(f - resid).max() <= 1e-7 * max(1.0, np.abs(f).max())


def test_layered_topography_is_time_invariant():
    sys = DebrisFlow(1, 9.8, 0.5)
    mms = make_mms(sys)
    x = np.linspace(0.0, 1.0, 21)
    b0 = mms.exact(x, 0.0)[6]
    b1 = mms.exact(x, 0.4)[6]
    assert np.array_equal(b0, b1)
    assert np.abs(mms.forcing(x, 0.2)[6]).max() == 0.0


def test_unknown_system_rejected():
    class Odd:
        name = "odd"
    with pytest.raises(ValueError):
        make_mms(Odd())
