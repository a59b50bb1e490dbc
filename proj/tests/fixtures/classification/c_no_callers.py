from Crypto.Cipher import AES


def encrypt(key):
    return AES.new(key, AES.MODE_CTR)
