#include "ntklens/checkpoint.hpp"

#include "ntklens/errors.hpp"

#include <json.hpp>

#include <fstream>

namespace ntklens {
namespace {

constexpr int kFormatVersion = 1;

using nlohmann::json;

json block_to_json(const Matrix &m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["data"] = std::vector<double>(m.flat().begin(), m.flat().end());
    return j;
}

Matrix block_from_json(const json &j) {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != rows * cols) throw ConfigError("checkpoint block size mismatch");
    Matrix m(rows, cols);
    std::copy(data.begin(), data.end(), m.flat().begin());
    return m;
}

} // namespace

void save_model(const std::string &path, const Model &model) {
    const ModelConfig &c = model.config();
    json j;
    j["format_version"] = kFormatVersion;
    j["kind"] = model_kind_name(c.kind);
    j["width"] = c.width;
    j["vocab_size"] = c.vocab_size;
    j["heads"] = c.heads;
    j["activation"] = activation_name(c.activation);
    j["kernel_size"] = c.kernel_size;
    j["max_positions"] = c.max_positions;
    j["cnn_token_slot"] = c.cnn_token_slot;
    j["variances"] = {{"emb", c.vars.emb},
                      {"hidden", c.vars.hidden},
                      {"head", c.vars.head},
                      {"recur", c.vars.recur}};
    json blocks;
    for (const auto &[name, m] : model.trainable_blocks()) blocks[name] = block_to_json(*m);
    if (c.kind == ModelKind::Sa) blocks["pos"] = block_to_json(model.pos);
    j["blocks"] = std::move(blocks);

    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write checkpoint: " + path);
    out << j.dump();
    if (!out) throw ConfigError("checkpoint write failed: " + path);
}

Model load_model(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open checkpoint: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception &e) {
        throw ConfigError("checkpoint parse error in " + path + ": " + e.what());
    }
    const int version = j.value("format_version", -1);
    if (version != kFormatVersion)
        throw UnsupportedError("checkpoint format version " + std::to_string(version) +
                               " not supported (expected " + std::to_string(kFormatVersion) + ")");
    try {
        ModelConfig c;
        c.kind = model_kind_from_name(j.at("kind").get<std::string>());
        c.width = j.at("width").get<int>();
        c.vocab_size = j.at("vocab_size").get<int>();
        c.heads = j.at("heads").get<int>();
        c.activation = activation_from_name(j.at("activation").get<std::string>());
        c.kernel_size = j.at("kernel_size").get<int>();
        c.max_positions = j.at("max_positions").get<int>();
        c.cnn_token_slot = j.at("cnn_token_slot").get<int>();
        const json &vars = j.at("variances");
        c.vars.emb = vars.at("emb").get<double>();
        c.vars.hidden = vars.at("hidden").get<double>();
        c.vars.head = vars.at("head").get<double>();
        c.vars.recur = vars.at("recur").get<double>();

        Model model(c, RngStream(0));
        const json &blocks = j.at("blocks");
        for (auto &[name, m] : model.trainable_blocks()) {
            Matrix loaded = block_from_json(blocks.at(name));
            if (!loaded.same_shape(*m))
                throw ConfigError("checkpoint block shape mismatch for " + name);
            *m = std::move(loaded);
        }
        if (c.kind == ModelKind::Sa) {
            Matrix loaded = block_from_json(blocks.at("pos"));
            if (!loaded.same_shape(model.pos)) throw ConfigError("checkpoint pos shape mismatch");
            model.pos = std::move(loaded);
        }
        return model;
    } catch (const json::exception &e) {
        throw ConfigError("malformed checkpoint " + path + ": " + e.what());
    }
}

} // namespace ntklens
