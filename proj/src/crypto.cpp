#include "vtsim/crypto.hpp"

#include <bit>

namespace vtsim::crypto {

using K = CryptoError::Kind;

KeyPair keygen(const CurveParams& params, Rng& rng) {
  return keypair_from_private(1 + rng.below(params.order - 1), params);
}

KeyPair keypair_from_private(Scalar private_key, const CurveParams& params) {
  return KeyPair{private_key, ec::scalar_mul(private_key, params.generator, params)};
}

SharedSecret ecdh_shared(Scalar my_private, const CurvePoint& peer_public, const CurveParams& params) {
  if (peer_public.is_identity() || !ec::is_on_curve(peer_public, params)) {
    throw CryptoError(K::InvalidPeerKey, "peer public key " + peer_public.to_string() + " rejected");
  }
  SharedSecret out;
  out.point = ec::scalar_mul(my_private, peer_public, params);
  if (out.point.is_identity()) {
    throw CryptoError(K::InvalidPeerKey, "shared point is the identity");
  }
  const unsigned width = (std::bit_width(params.q) + 7) / 8;
  out.key_bytes.resize(width);
  std::uint64_t x = out.point.x();
  for (unsigned i = 0; i < width; ++i) {
    out.key_bytes[width - 1 - i] = static_cast<std::uint8_t>(x & 0xFFU);
    x >>= 8U;
  }
  return out;
}

unsigned default_kappa(const CurveParams& params) noexcept { return params.q < 1024 ? 4 : 16; }

unsigned payload_bits(const CurveParams& params, unsigned kappa) noexcept {
  const std::uint64_t capacity = params.q / kappa;
  return capacity == 0 ? 0 : static_cast<unsigned>(std::bit_width(capacity)) - 1;
}

EncodedBlock encode_message(std::uint64_t m, const CurveParams& params, unsigned kappa) {
  if (kappa == 0 || m >= params.q / kappa) {
    throw CryptoError(K::MessageOutOfRange, "message " + std::to_string(m) + " outside [0, q/kappa)");
  }
  for (unsigned j = 0; j < kappa; ++j) {
    const ec::FieldElement x = params.fe(m * kappa + j);
    const ec::FieldElement rhs = x * x * x + params.fe(params.a) * x + params.fe(params.b);
    if (const auto y = ec::field_sqrt(rhs)) {
      return EncodedBlock{CurvePoint::affine(x.value(), y->value()), payload_bits(params, kappa)};
    }
  }
  throw CryptoError(K::EncodingFailure, "no curve point for message " + std::to_string(m));
}

std::uint64_t decode_message(const EncodedBlock& block, unsigned kappa) {
  if (block.point.is_identity()) throw CryptoError(K::IdentityPoint, "cannot decode the identity");
  return block.point.x() / kappa;
}

CipherPair elgamal_encrypt(const CurvePoint& pm, const CurvePoint& receiver_public, Scalar k,
                           const CurveParams& params) {
  if (k == 0 || k >= params.order) {
    throw CryptoError(K::InvalidEphemeral, "ephemeral " + std::to_string(k) + " outside [1, n)");
  }
  if (receiver_public.is_identity() || !ec::is_on_curve(receiver_public, params)) {
    throw CryptoError(K::InvalidPeerKey, "receiver key " + receiver_public.to_string() + " rejected");
  }
  return CipherPair{ec::scalar_mul(k, params.generator, params),
                    ec::point_add(pm, ec::scalar_mul(k, receiver_public, params), params)};
}

CurvePoint elgamal_decrypt(const CipherPair& ct, Scalar receiver_private, const CurveParams& params) {
  const CurvePoint mask = ec::scalar_mul(receiver_private, ct.c1, params);
  return ec::point_add(ct.c2, ec::point_negate(mask, params), params);
}

std::vector<std::uint64_t> pack_blocks(std::span<const std::uint8_t> payload, unsigned bits) {
  if (bits == 0 || bits > 32) throw CryptoError(K::PayloadTooLong, "unsupported block width");
  if (payload.size() >= (std::uint64_t{1} << bits)) {
    throw CryptoError(K::PayloadTooLong,
                      "payload of " + std::to_string(payload.size()) + " bytes exceeds the length block");
  }
  const std::size_t total_bits = payload.size() * 8;
  const std::size_t data_blocks = (total_bits + bits - 1) / bits;
  std::vector<std::uint64_t> out(1 + data_blocks, 0);
  out[0] = payload.size();
  for (std::size_t i = 0; i < total_bits; ++i) {
    const std::uint64_t bit = (payload[i / 8] >> (i % 8)) & 1U;
    out[1 + i / bits] |= bit << (i % bits);
  }
  return out;
}

std::vector<std::uint8_t> unpack_blocks(std::span<const std::uint64_t> blocks, unsigned bits) {
  if (blocks.empty()) throw CryptoError(K::DecryptionGarbage, "missing length block");
  const std::uint64_t limit = std::uint64_t{1} << bits;
  for (std::uint64_t b : blocks) {
    if (b >= limit) throw CryptoError(K::DecryptionGarbage, "block value exceeds block width");
  }
  const std::uint64_t length = blocks[0];
  const std::size_t total_bits = length * 8;
  if (blocks.size() != 1 + (total_bits + bits - 1) / bits) {
    throw CryptoError(K::DecryptionGarbage, "length block disagrees with block count");
  }
  std::vector<std::uint8_t> out(length, 0);
  for (std::size_t i = 0; i < total_bits; ++i) {
    const std::uint64_t bit = (blocks[1 + i / bits] >> (i % bits)) & 1U;
    out[i / 8] |= static_cast<std::uint8_t>(bit << (i % 8));
  }
  // Padding bits past the payload must be zero.
  const std::size_t used = total_bits % bits;
  if (used != 0 && (blocks.back() >> used) != 0) {
    throw CryptoError(K::DecryptionGarbage, "non-zero padding");
  }
  return out;
}

std::vector<CipherPair> encrypt_bytes(std::span<const std::uint8_t> payload,
                                      const CurvePoint& receiver_public, const CurveParams& params,
                                      unsigned kappa, Rng& rng) {
  const std::vector<std::uint64_t> blocks = pack_blocks(payload, payload_bits(params, kappa));
  std::vector<CipherPair> out;
  out.reserve(blocks.size());
  for (std::uint64_t m : blocks) {
    const EncodedBlock encoded = encode_message(m, params, kappa);
    const Scalar k = 1 + rng.below(params.order - 1);
    out.push_back(elgamal_encrypt(encoded.point, receiver_public, k, params));
  }
  return out;
}

std::vector<std::uint8_t> decrypt_bytes(std::span<const CipherPair> blocks, Scalar receiver_private,
                                        const CurveParams& params, unsigned kappa) {
  std::vector<std::uint64_t> values;
  values.reserve(blocks.size());
  const unsigned bits = payload_bits(params, kappa);
  for (const CipherPair& ct : blocks) {
    const CurvePoint pm = elgamal_decrypt(ct, receiver_private, params);
    if (pm.is_identity()) throw CryptoError(K::DecryptionGarbage, "block decrypted to the identity");
    values.push_back(decode_message(EncodedBlock{pm, bits}, kappa));
  }
  return unpack_blocks(values, bits);
}

Challenge auth_challenge(const CurveParams& params, Rng& rng) {
  const Scalar c = 1 + rng.below(params.order - 1);
  return Challenge{c, ec::scalar_mul(c, params.generator, params)};
}

CurvePoint auth_respond(Scalar vehicle_private, const CurvePoint& challenge_point,
                        const CurveParams& params) {
  if (!ec::is_on_curve(challenge_point, params)) {
    throw CryptoError(K::InvalidChallenge, "challenge " + challenge_point.to_string() + " is off the curve");
  }
  return ec::scalar_mul(vehicle_private, challenge_point, params);
}

bool auth_verify(const CurvePoint& response, Scalar challenge_scalar, const CurvePoint& vehicle_public,
                 const CurveParams& params) {
  return response == ec::scalar_mul(challenge_scalar, vehicle_public, params);
}

} // namespace vtsim::crypto
