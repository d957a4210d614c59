import numpy as np
import pytest

from fcmcodec import (
    CodecId,
    EncoderConfig,
    FeatureTensor,
    TensorGroup,
    compute_global_stats,
    fcm_decode,
    fcm_decode_with_info,
    fcm_encode,
)
from fcmcodec.bitstream import parse_stream
from fcmcodec.errors import DomainError

from conftest import random_group, random_tensor


def lossless_cfg(**kw):
    return EncoderConfig(codec=CodecId.RAW_LOSSLESS, **kw)


class TestEncode:
    def test_stream_parses(self, rng):
        group = random_group(rng, count=3)
        stream = fcm_encode(group, lossless_cfg())
        assert len(parse_stream(stream)) == 3

    def test_prune_header_matches_energy_ranking(self, rng):
        # channel energies 0 < 1 < 2 < 3 by construction
        data = np.stack(
            [np.full((4, 4), float(i), np.float32) for i in range(1, 5)]
        ) + rng.normal(0, 0.01, (4, 4, 4)).astype(np.float32)
        group = TensorGroup((FeatureTensor(data),))
        stream = fcm_encode(group, lossless_cfg(prune_ratio=0.5))
        (header, _), = parse_stream(stream)
        assert header.pruned_k == 2
        from fcmcodec import LcrCode, lcr_decode

        pruned = lcr_decode(LcrCode(header.pruned_k, header.lcr_rank), 4)
        assert pruned.indices == (0, 1)

    def test_empty_group_rejected(self):
        with pytest.raises(DomainError):
            TensorGroup(())

    def test_config_validation(self):
        with pytest.raises(DomainError):
            EncoderConfig(prune_ratio=1.0)
        with pytest.raises(DomainError):
            EncoderConfig(bit_depth=17)
        with pytest.raises(DomainError):
            EncoderConfig(transform="nope")


class TestDecode:
    def test_shapes_and_order_preserved(self, rng):
        group = random_group(rng, count=4)
        decoded = fcm_decode(fcm_encode(group, lossless_cfg()))
        assert [t.shape for t in decoded.tensors] == [t.shape for t in group.tensors]

    def test_near_lossless_error_bound(self, rng):
        # the two refinement stages drift each element by an amount
        # proportional to the value range (rescale toward the transmitted
        # sigma) and to step/sqrt(elements) (mean residue); the 1e-6 slack
        # is absolute, so the bound needs large tensors of moderate range
        t = FeatureTensor((rng.random((128, 128, 128)) * 0.25).astype(np.float32))
        group = TensorGroup((t,))
        stream = fcm_encode(group, lossless_cfg(bit_depth=10))
        decoded, infos = fcm_decode_with_info(stream)
        h = infos[0].header
        bound = (h.conv_max - h.conv_min) / (2 * 1023) + 1e-6
        err = np.max(np.abs(decoded.tensors[0].data.astype(np.float64) - t.data))
        assert err <= bound

    def test_transmitted_stats_restored(self, rng):
        group = random_group(rng, count=2, mu=1.0)
        for codec in (CodecId.RAW_LOSSLESS, CodecId.BLOCK_DCT):
            cfg = EncoderConfig(codec=codec, qp=22, prune_ratio=0.25)
            _, infos = fcm_decode_with_info(fcm_encode(group, cfg))
            for info in infos:
                h = info.header
                assert info.final_stats.mu == pytest.approx(h.transform_stats.mu, rel=1e-4, abs=1e-6)
                assert info.final_stats.sigma == pytest.approx(h.transform_stats.sigma, rel=1e-4)
                assert info.reduced_stats.mu == pytest.approx(h.reduced_stats.mu, rel=1e-4, abs=1e-6)
                assert info.reduced_stats.sigma == pytest.approx(h.reduced_stats.sigma, rel=1e-4)

    def test_decode_error_carries_unit_index(self, rng):
        group = random_group(rng, count=2)
        stream = bytearray(fcm_encode(group, lossless_cfg()))
        stream[-1] ^= 0xFF
        from fcmcodec.errors import FcmError

        with pytest.raises(FcmError, match="unit 1"):
            fcm_decode(bytes(stream))


class TestTransforms:
    def test_meanpool_roundtrip_shape(self, rng):
        t = random_tensor(rng, channels=4, height=8, width=12)
        group = TensorGroup((t,))
        cfg = lossless_cfg(transform="meanpool2x")
        decoded = fcm_decode(fcm_encode(group, cfg), transform="meanpool2x")
        assert decoded.tensors[0].shape == t.shape

    def test_meanpool_restores_stats(self, rng):
        t = random_tensor(rng, channels=4, height=8, width=12, mu=2.0)
        cfg = lossless_cfg(transform="meanpool2x")
        _, infos = fcm_decode_with_info(
            fcm_encode(TensorGroup((t,)), cfg), transform="meanpool2x"
        )
        info = infos[0]
        assert info.final_stats.mu == pytest.approx(info.header.transform_stats.mu, rel=1e-4)
        assert info.final_stats.sigma == pytest.approx(info.header.transform_stats.sigma, rel=1e-4)

    def test_meanpool_rejects_odd_dims(self, rng):
        t = random_tensor(rng, channels=2, height=7, width=8)
        with pytest.raises(DomainError):
            fcm_encode(TensorGroup((t,)), lossless_cfg(transform="meanpool2x"))


class TestDeterminismAndRate:
    def test_byte_identical_across_workers(self, rng):
        group = random_group(rng, count=4)
        cfg = EncoderConfig(codec=CodecId.BLOCK_DCT, qp=22, prune_ratio=0.25)
        baseline = fcm_encode(group, cfg, workers=1)
        for workers in (2, 4):
            assert fcm_encode(group, cfg, workers=workers) == baseline

    def test_pruning_reduces_stream_size(self, rng):
        group = random_group(rng, count=2, channels=8, height=16, width=16)
        sizes = [
            len(fcm_encode(group, lossless_cfg(prune_ratio=r))) for r in (0.0, 0.25, 0.5)
        ]
        assert sizes[0] > sizes[1] > sizes[2]
