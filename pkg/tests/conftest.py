import dataclasses

import numpy as np
import pytest

import hirota_ist as h


@pytest.fixture(scope="session")
def fig3a():
    return h.preset("fig3a")


@pytest.fixture(scope="session")
def fig3a_spec(fig3a):
    return fig3a.spec()


@pytest.fixture(scope="session")
def fig3a_field(fig3a_spec):
    return h.sampled_field(fig3a_spec, t0=0.0, L=20.0)


@pytest.fixture(scope="session")
def fig3a_bg_measured(fig3a_spec):
    Qm = h.reconstruct_Q(-40.0, 0.0, fig3a_spec)
    return dataclasses.replace(fig3a_spec.bg, Qminus=Qm)


@pytest.fixture(scope="session")
def fig6():
    return h.preset("fig6")


@pytest.fixture(scope="session")
def fig6_spec(fig6):
    return fig6.spec()


@pytest.fixture(scope="session")
def background_bg():
    eye = np.eye(2, dtype=complex)
    return h.Background(sigma=-1, k0=1.0, alpha=1.0, beta=0.1, Qplus=eye, Qminus=eye)


@pytest.fixture(scope="session")
def background_field(background_bg):
    Qp = background_bg.Qplus

    def field(x, t):
        return Qp

    return field
