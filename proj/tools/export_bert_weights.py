# Copyright 2026 The factframe Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Exports a Hugging Face BERT checkpoint for the adapter encoder.

Writes <out>/encoder.ffwt (named float32 tensors, linear weights stored as
in x out) and <out>/vocab.txt. Point FACTFRAME_CACHE_DIR at <out>, or pass
--base-weights and --vocab to `factframe train --encoder adapter`.

    python3 tools/export_bert_weights.py bert-base-uncased /path/to/cache
"""

import argparse
import os
import struct

from transformers import AutoTokenizer, BertModel

MAGIC = b"FFWT0001"


def tensors(model):
    for name, value in model.state_dict().items():
        if name.startswith("pooler.") or name.endswith("position_ids"):
            continue
        array = value.detach().float().cpu().numpy()
        if array.ndim == 1:
            array = array.reshape(1, -1)
        elif not name.startswith("embeddings."):
            array = array.T  # torch Linear stores out x in
        yield name, array


def write_ffwt(path, named):
    named = list(named)
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<I", len(named)))
        for name, array in named:
            encoded = name.encode("utf-8")
            f.write(struct.pack("<I", len(encoded)))
            f.write(encoded)
            f.write(struct.pack("<II", *array.shape))
            f.write(array.astype("<f4", order="C").tobytes())


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("model", help="model name or local directory")
    parser.add_argument("out", help="output directory")
    args = parser.parse_args()

    model = BertModel.from_pretrained(args.model)
    tokenizer = AutoTokenizer.from_pretrained(args.model)
    os.makedirs(args.out, exist_ok=True)
    write_ffwt(os.path.join(args.out, "encoder.ffwt"), tensors(model))
    vocab = sorted(tokenizer.get_vocab().items(), key=lambda kv: kv[1])
    with open(os.path.join(args.out, "vocab.txt"), "w", encoding="utf-8") as f:
        for token, _ in vocab:
            f.write(token + "\n")
    print(f"wrote {args.out}/encoder.ffwt and {args.out}/vocab.txt")


if __name__ == "__main__":
    main()
