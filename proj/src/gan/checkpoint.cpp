#include "msim/gan/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace msim::gan {

namespace {

using nlohmann::json;

json mat_to_json(const Mat& m) {
    return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.a}};
}

Mat mat_from_json(const json& j, int rows, int cols, const std::string& what) {
    Mat m(rows, cols);
    if (j.at("rows").get<int>() != rows || j.at("cols").get<int>() != cols)
        throw std::runtime_error("checkpoint: " + what + " has unexpected shape");
    const auto& data = j.at("data");
    if (data.size() != m.a.size())
        throw std::runtime_error("checkpoint: " + what + " has unexpected size");
    for (std::size_t i = 0; i < m.a.size(); ++i) m.a[i] = data[i].get<double>();
    return m;
}

std::vector<double> vec_from_json(const json& j, std::size_t n, const std::string& what) {
    if (j.size() != n) throw std::runtime_error("checkpoint: " + what + " has unexpected size");
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = j[i].get<double>();
    return v;
}

json lstm_to_json(const LstmParams& p) {
    return json{{"wx", mat_to_json(p.wx)}, {"wh", mat_to_json(p.wh)}, {"b", p.b}};
}

LstmParams lstm_from_json(const json& j, int input, int hidden, const std::string& what) {
    LstmParams p;
    p.input = input;
    p.hidden = hidden;
    p.wx = mat_from_json(j.at("wx"), input, 4 * hidden, what + ".wx");
    p.wh = mat_from_json(j.at("wh"), hidden, 4 * hidden, what + ".wh");
    p.b = vec_from_json(j.at("b"), static_cast<std::size_t>(4) * hidden, what + ".b");
    return p;
}

json dense_to_json(const DenseParams& p) {
    return json{{"w", mat_to_json(p.w)}, {"b", p.b}};
}

DenseParams dense_from_json(const json& j, int in, int out, const std::string& what) {
    DenseParams p;
    p.w = mat_from_json(j.at("w"), in, out, what + ".w");
    p.b = vec_from_json(j.at("b"), static_cast<std::size_t>(out), what + ".b");
    return p;
}

} // namespace

void save_checkpoint(const std::string& path, const ModelHyper& hyper,
                     const GeneratorParams& gen, const CriticParams& critic,
                     const TrainConfig& cfg) {
    json j;
    j["format_version"] = 1;
    j["hyper"] = {{"n_history", hyper.n_history},     {"n_noise", hyper.n_noise},
                  {"n_features", hyper.n_features},   {"lstm_hidden", hyper.lstm_hidden},
                  {"conv_layers", hyper.conv_layers}, {"conv_channels", hyper.conv_channels},
                  {"conv_kernel", hyper.conv_kernel}, {"critic_width", hyper.critic_width}};
    j["train"] = {{"epochs", cfg.epochs},
                  {"batch_size", cfg.batch_size},
                  {"critic_steps", cfg.critic_steps},
                  {"gp_lambda", cfg.gp_lambda},
                  {"gp_mode", gp_mode_name(cfg.gp_mode)},
                  {"lr", cfg.lr},
                  {"beta1", cfg.beta1},
                  {"beta2", cfg.beta2},
                  {"seed", cfg.seed}};
    j["scaler_file"] = cfg.scaler_ref;

    json g;
    g["enc"] = lstm_to_json(gen.enc);
    g["convs"] = json::array();
    for (const auto& c : gen.convs)
        g["convs"].push_back(json{{"w", mat_to_json(c.w)}, {"b", c.b}});
    g["out"] = dense_to_json(gen.out);
    j["generator"] = std::move(g);

    json c;
    c["enc"] = lstm_to_json(critic.enc);
    c["fc1"] = dense_to_json(critic.fc1);
    c["fc2"] = dense_to_json(critic.fc2);
    c["fc3"] = dense_to_json(critic.fc3);
    j["critic"] = std::move(c);

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump() << '\n';
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    if (j.at("format_version").get<int>() != 1)
        throw std::runtime_error("checkpoint: unsupported format version");

    Checkpoint ckpt;
    const auto& h = j.at("hyper");
    ckpt.hyper.n_history = h.at("n_history").get<int>();
    ckpt.hyper.n_noise = h.at("n_noise").get<int>();
    ckpt.hyper.n_features = h.at("n_features").get<int>();
    ckpt.hyper.lstm_hidden = h.at("lstm_hidden").get<int>();
    ckpt.hyper.conv_layers = h.at("conv_layers").get<int>();
    ckpt.hyper.conv_channels = h.at("conv_channels").get<int>();
    ckpt.hyper.conv_kernel = h.at("conv_kernel").get<int>();
    ckpt.hyper.critic_width = h.at("critic_width").get<int>();
    ckpt.scaler_ref = j.at("scaler_file").get<std::string>();
    ckpt.gp_mode = gp_mode_from_name(j.at("train").at("gp_mode").get<std::string>());
    ckpt.seed = j.at("train").at("seed").get<std::uint64_t>();

    const ModelHyper& hy = ckpt.hyper;
    const auto& g = j.at("generator");
    ckpt.gen.enc = lstm_from_json(g.at("enc"), hy.n_features, hy.lstm_hidden, "generator.enc");
    const auto& convs = g.at("convs");
    if (static_cast<int>(convs.size()) != hy.conv_layers)
        throw std::runtime_error("checkpoint: conv layer count mismatch");
    ckpt.gen.convs.resize(hy.conv_layers);
    for (int i = 0; i < hy.conv_layers; ++i) {
        Conv1dParams& c = ckpt.gen.convs[i];
        c.in_ch = i == 0 ? 1 : hy.conv_channels;
        c.out_ch = hy.conv_channels;
        c.k = hy.conv_kernel;
        c.len = hy.gen_input_len();
        c.w = mat_from_json(convs[i].at("w"), c.out_ch, c.in_ch * c.k,
                            "generator.conv" + std::to_string(i));
        c.b = vec_from_json(convs[i].at("b"), static_cast<std::size_t>(c.out_ch),
                            "generator.conv" + std::to_string(i) + ".b");
    }
    ckpt.gen.out = dense_from_json(g.at("out"), hy.conv_channels * hy.gen_input_len(), 4,
                                   "generator.out");

    const auto& c = j.at("critic");
    ckpt.critic.enc = lstm_from_json(c.at("enc"), hy.n_features, hy.lstm_hidden, "critic.enc");
    ckpt.critic.fc1 = dense_from_json(c.at("fc1"), 4 + hy.lstm_hidden, hy.critic_width, "critic.fc1");
    ckpt.critic.fc2 = dense_from_json(c.at("fc2"), hy.critic_width, hy.critic_width, "critic.fc2");
    ckpt.critic.fc3 = dense_from_json(c.at("fc3"), hy.critic_width, 1, "critic.fc3");
    return ckpt;
}

} // namespace msim::gan
